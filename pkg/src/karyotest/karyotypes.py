"""The base karyotype ontology and axioms for parsed karyotypes.

A karyotype K is written as derived from an anonymous intermediate that is
itself derived from one of six base karyotypes and carries K's events::

    kK ⊑ ∃derivedFrom.(∃derivedFrom.<base> ⊓ event_1 ⊓ ... ⊓ event_n)

``derivedFrom`` is transitive, so the facet classes (``MaleKaryotype ≡
∃derivedFrom.k46_XY`` and friends) see straight through the chain.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from . import bands as B
from .errors import UnknownEntity, UnsupportedPloidy
from .iscn import Deletion, Duplication, Gain, Inversion, Karyotype, Loss, Translocation, render
from .ontology import (
    Class,
    DisjointWith,
    EquivalentTo,
    Named,
    Some,
    SubClassOf,
    TBox,
    TransitiveRole,
    conj,
)

DERIVED_FROM = "derivedFrom"
HAS_EVENT = "hasEvent"
HAS_BREAKPOINT = "hasBreakPoint"

HUMAN_CHROMOSOME = "HumanChromosome"
AUTOSOME = "HumanAutosome"
SEX_CHROMOSOME = "HumanSexChromosome"
KARYOTYPE = "Karyotype"
BASE_KARYOTYPE = "BaseKaryotype"
EXAMPLE_KARYOTYPE = "ISCNExampleKaryotype"
EVENT = "Event"
EVENT_CLASSES = {
    Deletion: "Deletion",
    Translocation: "Translocation",
    Inversion: "Inversion",
    Duplication: "Duplication",
    Gain: "Gain",
    Loss: "Loss",
}


@dataclass(frozen=True)
class BaseKaryotype:
    name: str
    ploidy: int
    sex: tuple


BASES = {
    b.name: b
    for b in (
        BaseKaryotype("k23_N", 1, ("N",)),
        BaseKaryotype("k46_XN", 2, ("X", "N")),
        BaseKaryotype("k46_XX", 2, ("X", "X")),
        BaseKaryotype("k46_XY", 2, ("X", "Y")),
        BaseKaryotype("k69_XNN", 3, ("X", "N", "N")),
        BaseKaryotype("k92_XNNN", 4, ("X", "N", "N", "N")),
    )
}

#: facet class -> base karyotype it is defined from
FACETS = {
    "MaleKaryotype": "k46_XY",
    "FemaleKaryotype": "k46_XX",
    "DiploidKaryotype": "k46_XN",
    "HaploidKaryotype": "k23_N",
    "TriploidKaryotype": "k69_XNN",
    "TetraploidKaryotype": "k92_XNNN",
}


def base_ontology(bands: B.ClassBatch, name: str = "karyotype") -> TBox:
    t = TBox(name)
    t.declare_role(DERIVED_FROM, HAS_EVENT, HAS_BREAKPOINT, B.IS_BAND_OF)
    t.add(TransitiveRole(DERIVED_FROM))

    t.declare_class(HUMAN_CHROMOSOME, AUTOSOME, SEX_CHROMOSOME)
    t.add(SubClassOf(Named(AUTOSOME), Named(HUMAN_CHROMOSOME)))
    t.add(SubClassOf(Named(SEX_CHROMOSOME), Named(HUMAN_CHROMOSOME)))
    t.add(DisjointWith(AUTOSOME, SEX_CHROMOSOME))
    for c in B.CHROMOSOMES:
        chrom = B.chromosome_class(c)
        t.declare_class(chrom)
        parent = SEX_CHROMOSOME if c in ("X", "Y") else AUTOSOME
        t.add(SubClassOf(Named(chrom), Named(parent)))

    t.declare_class(B.BAND_ROOT)
    t.declare_class(*bands.roots)
    t.declare_class(*bands.declarations)
    for child, parent in bands.root_axioms + bands.subclass_axioms:
        t.add(SubClassOf(Named(child), Named(parent)))
    for band, role, chrom in bands.role_axioms:
        t.add(SubClassOf(Named(band), Some(role, Named(chrom))))

    t.declare_class(EVENT, *EVENT_CLASSES.values())
    for ev in EVENT_CLASSES.values():
        t.add(SubClassOf(Named(ev), Named(EVENT)))

    t.declare_class(KARYOTYPE, BASE_KARYOTYPE, EXAMPLE_KARYOTYPE)
    t.add(SubClassOf(Named(BASE_KARYOTYPE), Named(KARYOTYPE)))
    t.add(SubClassOf(Named(EXAMPLE_KARYOTYPE), Named(KARYOTYPE)))
    for base in BASES:
        t.declare_class(base)
        t.add(SubClassOf(Named(base), Named(BASE_KARYOTYPE)))
        # EL+ has no reflexive roles; this lets a base classify under its own facet
        t.add(SubClassOf(Named(base), Some(DERIVED_FROM, Named(base))))
    t.add(SubClassOf(Named("k46_XX"), Named("k46_XN")))
    t.add(SubClassOf(Named("k46_XY"), Named("k46_XN")))

    for facet, base in FACETS.items():
        t.declare_class(facet)
        t.add(SubClassOf(Named(facet), Named(KARYOTYPE)))
        t.add(EquivalentTo(facet, Some(DERIVED_FROM, Named(base))))
    return t


def _ploidy(total: int) -> int:
    p = int((Decimal(total) / Decimal(23)).quantize(Decimal(1), rounding=ROUND_HALF_UP))
    if p not in (1, 2, 3, 4):
        raise UnsupportedPloidy(f"{total} chromosomes is not 1-4 sets of 23")
    return p


def base_sex(k: Karyotype) -> tuple:
    """Observed sex symbols, plus lost and minus gained sex chromosomes, padded to ploidy."""
    ploidy = _ploidy(k.total)
    counts = Counter(k.sex)
    for e in k.events:
        if isinstance(e, Loss) and e.chromosome in ("X", "Y"):
            counts[e.chromosome] += 1
        elif isinstance(e, Gain) and e.chromosome in ("X", "Y") and counts[e.chromosome]:
            counts[e.chromosome] -= 1
    symbols = ["X"] * counts["X"] + ["Y"] * counts["Y"] + ["N"] * counts["N"]
    symbols = (symbols + ["N"] * ploidy)[:ploidy]
    return tuple(symbols)


def derivation_base(k: Karyotype) -> BaseKaryotype:
    sex = base_sex(k)
    ploidy = len(sex)
    if ploidy == 2:
        if sex == ("X", "X"):
            return BASES["k46_XX"]
        if sex == ("X", "Y"):
            return BASES["k46_XY"]
        return BASES["k46_XN"]
    return {1: BASES["k23_N"], 3: BASES["k69_XNN"], 4: BASES["k92_XNNN"]}[ploidy]


def karyotype_class(k: Karyotype) -> str:
    """Class name for a karyotype: ``45,X`` -> ``k45_X``."""
    return "k" + render(k).replace(",", "_")


def _band(chromosome: str, band, tbox) -> Named:
    name = B.band_class(chromosome, band.label)
    if tbox is not None and name not in tbox.classes:
        raise UnknownEntity(f"unknown band {chromosome}{band.label} ({name})")
    return Named(name)


def _chromosome(chromosome: str) -> Named:
    return Named(B.chromosome_class(chromosome))


def event_concept(e, tbox: TBox = None):
    """The ``∃hasEvent.(Kind ⊓ ∃hasBreakPoint.X ...)`` concept for one event.

    When ``tbox`` is given, band classes are checked against it.
    """
    if isinstance(e, (Gain, Loss)):
        points = [_chromosome(e.chromosome)]
    elif isinstance(e, Translocation):
        points = [
            _band(e.first.chromosome, e.first.band, tbox),
            _band(e.second.chromosome, e.second.band, tbox),
        ]
    elif isinstance(e, Deletion):
        points = [_band(e.chromosome, e.band, tbox)]
        if e.end is not None:
            points.append(_band(e.chromosome, e.end, tbox))
    elif isinstance(e, (Inversion, Duplication)):
        points = [_band(e.chromosome, e.first, tbox), _band(e.chromosome, e.second, tbox)]
    else:
        raise TypeError(f"not an event: {e!r}")
    kind = Named(EVENT_CLASSES[type(e)])
    return Some(HAS_EVENT, conj(kind, *(Some(HAS_BREAKPOINT, p) for p in points)))


def anonymous_sex_event(kind: str):
    """Unlocated gain or loss of some sex chromosome."""
    return Some(HAS_EVENT, conj(Named(kind), Some(HAS_BREAKPOINT, Named(SEX_CHROMOSOME))))


def karyotype_definition(k: Karyotype, tbox: TBox = None):
    base = derivation_base(k)
    parts = [Some(DERIVED_FROM, Named(base.name))]
    parts += [event_concept(e, tbox) for e in k.events]
    if not k.events:
        expected = 23 * base.ploidy
        if k.total < expected:
            parts.append(anonymous_sex_event("Loss"))
        elif k.total > expected:
            parts.append(anonymous_sex_event("Gain"))
    return Some(DERIVED_FROM, conj(*parts))


def karyotype_additions(k: Karyotype, tbox: TBox = None) -> list:
    """Declarations and axioms that add ``k`` to an ontology built by base_ontology."""
    name = karyotype_class(k)
    return [
        Class(name),
        SubClassOf(Named(name), Named(EXAMPLE_KARYOTYPE)),
        SubClassOf(Named(name), karyotype_definition(k, tbox)),
    ]


def axiomatize(k: Karyotype, tbox: TBox) -> TBox:
    return tbox.apply(karyotype_additions(k, tbox))


def build_ontology(band_trees, karyotypes=()) -> TBox:
    t = base_ontology(B.expand_all(band_trees))
    for k in karyotypes:
        axiomatize(k, t)
    return t

