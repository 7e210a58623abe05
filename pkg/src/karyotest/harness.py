"""Four-tier ontology test suite, driven in part by a facet table.

Every test case declares a tier: software-bound (touches no ontology
object), ontology-bound (reads the TBox), reasoner-bound (asks the
classifier) or probe-bound (reasoner-bound, run against temporary probe
entities that are reverted afterwards).  Cases run against a
:class:`SuiteContext` that records what they touch, so a case that
under-declares its tier is caught.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Callable, Optional

from . import bands as B
from . import iscn
from . import karyotypes as K
from . import reasoner as R
from .errors import FormatError, TierViolation, UnknownEntity
from .ontology import Class, Named, SubClassOf, Some, TBox, snapshot_digest, with_probe

FACET_VALUES = {"1": 1, "-1": -1, "0": 0}


class Tier(IntEnum):
    SOFTWARE = 1
    ONTOLOGY = 2
    REASONER = 3
    PROBE = 4

    @property
    def label(self) -> str:
        return ("SoftwareBound", "OntologyBound", "ReasonerBound", "ProbeBound")[self - 1]

    @property
    def column(self) -> str:
        return ("Software", "Ontology", "Reasoner", "Probe")[self - 1]


@dataclass
class TestCase:
    id: str
    tier: Tier
    assertion: Callable
    group: str = "Misc"
    probe: tuple = ()

    __test__ = False  # keep pytest from collecting this class


@dataclass(frozen=True)
class CaseResult:
    id: str
    tier: Tier
    group: str
    passed: bool
    message: str = ""


class SuiteContext:
    """What test assertions see.  Access is traced to check declared tiers."""

    def __init__(self, tbox: TBox):
        self._tbox = tbox
        self._cache = None
        self.touched = Tier.SOFTWARE

    def _touch(self, tier: Tier):
        if tier > self.touched:
            self.touched = tier

    @property
    def tbox(self) -> TBox:
        self._touch(Tier.ONTOLOGY)
        return self._tbox

    def band(self, name: str) -> bool:
        return B.is_band(self.tbox, name)

    def classification(self) -> R.SubsumptionMap:
        self._touch(Tier.REASONER)
        gen = (id(self._tbox), self._tbox.generation)
        if self._cache is None or self._cache[0] != gen:
            self._cache = (gen, R.classify(self._tbox))
        return self._cache[1]

    def isuperclass(self, sub: str, sup: str) -> bool:
        return R.isuperclass(self.classification(), sub, sup)

    def coherent(self) -> bool:
        return R.coherent(self.classification())

    def consistent(self) -> bool:
        return R.consistent(self.classification())


def _outcome(value) -> tuple:
    if isinstance(value, tuple):
        passed, message = value
        return bool(passed), str(message)
    return bool(value), ""


def _violation(case: TestCase, touched: Tier) -> Optional[str]:
    if touched > case.tier:
        return f"declared {case.tier.label} but touched {touched.label} resources"
    if case.tier == Tier.PROBE:
        if not case.probe:
            return "declared ProbeBound but adds no probe entities"
        if touched < Tier.REASONER:
            return "declared ProbeBound but never invokes the reasoner"
    if case.tier == Tier.REASONER and touched < Tier.ONTOLOGY:
        return "declared ReasonerBound but references no ontology entity"
    return None


def _execute(case: TestCase, ctx: SuiteContext) -> tuple:
    ctx.touched = Tier.SOFTWARE
    if case.tier == Tier.PROBE:
        value = with_probe(ctx._tbox, case.probe, lambda _: case.assertion(ctx))
    else:
        value = case.assertion(ctx)
    return _outcome(value)


def tier_of(case: TestCase, tbox: TBox = None) -> Tier:
    """The case's declared tier; with ``tbox``, trace a run and validate it."""
    if tbox is not None:
        ctx = SuiteContext(tbox)
        try:
            _execute(case, ctx)
        except Exception:
            pass  # a failing assertion still shows what it touched
        problem = _violation(case, ctx.touched)
        if problem:
            raise TierViolation(f"{case.id}: {problem}")
    return case.tier


# -- reports ----------------------------------------------------------------


@dataclass
class TierReport:
    results: list = field(default_factory=list)
    problems: list = field(default_factory=list)

    def counts(self, tier: Tier, group: str = None) -> tuple:
        """(passed, failed, total) for a tier, optionally within one group."""
        rs = [r for r in self.results if r.tier == tier and (group is None or r.group == group)]
        passed = sum(r.passed for r in rs)
        return passed, len(rs) - passed, len(rs)

    @property
    def groups(self) -> list:
        return list(dict.fromkeys(r.group for r in self.results))

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.problems

    def format_table(self) -> str:
        cols = [t.column for t in Tier]
        width = max([len("Test Class"), len("Total")] + [len(g) for g in self.groups]) + 2
        head = "Test Class".ljust(width) + "".join(c.rjust(10) for c in cols)
        rule = "-" * len(head)
        lines = [head, rule]
        for g in self.groups:
            lines.append(g.ljust(width) + "".join(str(self.counts(t, g)[2]).rjust(10) for t in Tier))
        lines.append(rule)
        lines.append("Total".ljust(width) + "".join(str(self.counts(t)[2]).rjust(10) for t in Tier))
        lines.append("Failed".ljust(width) + "".join(str(self.counts(t)[1]).rjust(10) for t in Tier))
        return "\n".join(lines)

    def format(self) -> str:
        out = [self.format_table(), ""]
        failed = len(self.failures)
        out.append(
            f"assertions: {self.total}  passed: {self.total - failed}  failed: {failed}"
            f"  status: {'PASS' if self.ok else 'FAIL'}"
        )
        for r in self.failures:
            out.append(f"FAIL [{r.tier.label}] {r.group}: {r.id}: {r.message}")
        for p in self.problems:
            out.append(f"ERROR {p}")
        return "\n".join(out)


def run_suite(cases, tbox: TBox) -> TierReport:
    """Run every case once; failures and crashes are recorded, never raised."""
    report = TierReport()
    ctx = SuiteContext(tbox)
    before = snapshot_digest(tbox)
    for case in cases:
        try:
            passed, message = _execute(case, ctx)
        except Exception as e:  # a crashing assertion is a failed assertion
            passed, message = False, f"{type(e).__name__}: {e}"
        problem = _violation(case, ctx.touched)
        if problem:
            passed, message = False, f"TierViolation: {problem}"
        report.results.append(CaseResult(case.id, case.tier, case.group, passed, message))
    if snapshot_digest(tbox) != before:
        report.problems.append("ontology changed during the run; a probe was not reverted")
    return report


# -- facet tables -----------------------------------------------------------


class FacetValueError(ValueError):
    def __init__(self, row: int, column: str, value: str):
        self.row, self.column, self.value = row, column, value
        super().__init__(f"row {row}, column {column!r}: {value!r} is not one of 1, -1, 0")


@dataclass
class FacetTable:
    facet_names: tuple
    rows: list  # [(karyotype string, (values...))]

    def karyotypes(self) -> list:
        return [iscn.parse(k) for k, _ in self.rows]

    def non_zero_cells(self) -> int:
        return sum(1 for _, vals in self.rows for v in vals if v)


def facet_class(facet: str) -> str:
    return f"{facet}Karyotype"


def load_facet_table(path) -> FacetTable:
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None:
        return FacetTable((), [])
    header = [h.strip() for h in header]
    if not header[0] or any(not h for h in header[1:]):
        raise FormatError("blank column name in header", 1)
    facets = tuple(header[1:])
    rows = []
    for lineno, row in enumerate(reader, 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} cells, found {len(row)}", lineno)
        karyotype = row[0].strip()
        try:
            iscn.parse(karyotype)
        except iscn.ParseError as e:
            raise iscn.ParseError(e.position, e.expected, e.found, row=lineno) from None
        values = []
        for name, cell in zip(facets, row[1:]):
            cell = cell.strip()
            if cell not in FACET_VALUES:
                raise FacetValueError(lineno, name, cell)
            values.append(FACET_VALUES[cell])
        rows.append((karyotype, tuple(values)))
    return FacetTable(facets, rows)


def _facet_check(karyotype: str, kclass: str, facet: str, cls: str, value: int):
    def check(ctx: SuiteContext):
        entailed = ctx.isuperclass(kclass, cls)
        if entailed == (value == 1):
            return True, ""
        supers = sorted(s for s in ctx.classification()[kclass] if s.endswith("Karyotype"))
        want = "a subclass" if value == 1 else "not a subclass"
        return False, (
            f"karyotype {karyotype} facet {facet}: expected {want} of {cls}"
            f" (cell {value}); entailed karyotype superclasses: {', '.join(supers) or 'none'}"
        )

    return check


def assertions_from(table: FacetTable, tbox: TBox) -> list:
    """One reasoner-bound case per non-zero cell of ``table``."""
    classes = [facet_class(f) for f in table.facet_names]
    for f, c in zip(table.facet_names, classes):
        if c not in tbox.classes:
            raise UnknownEntity(f"facet column {f!r} has no class {c!r}")
    cases = []
    for karyotype, values in table.rows:
        kclass = K.karyotype_class(iscn.parse(karyotype))
        if kclass not in tbox.classes:
            raise UnknownEntity(f"karyotype {karyotype} is not in the ontology ({kclass})")
        for facet, cls, v in zip(table.facet_names, classes, values):
            if v == 0:
                continue
            cases.append(
                TestCase(
                    id=f"{karyotype} {facet}={v}",
                    tier=Tier.REASONER,
                    assertion=_facet_check(karyotype, kclass, facet, cls, v),
                    group="ISCN Examples",
                )
            )
    return cases


# -- the standard suite -----------------------------------------------------


def _software_cases(corpus) -> list:
    cases = []
    labels = [
        ("HumanChromosome1Bandp10", True, False),
        ("HumanChromosome1Bandq10", False, True),
        ("HumanChromosome1Bandp11.1", True, False),
        ("HumanChromosomeXBandq28", False, True),
        ("HumanChromosome1Band", False, False),
        ("HumanChromosome1", False, False),
    ]
    for label, p, q in labels:
        cases.append(TestCase(f"str_pband({label}) is {p}", Tier.SOFTWARE,
                              lambda ctx, label=label, p=p: B.str_pband(label) == p, "Human"))
        cases.append(TestCase(f"str_qband({label}) is {q}", Tier.SOFTWARE,
                              lambda ctx, label=label, q=q: B.str_qband(label) == q, "Human"))

    def roundtrip(text):
        def check(ctx):
            once = iscn.render(iscn.parse(text))
            return once == iscn.render(iscn.parse(once)), f"{text!r} -> {once!r} is not stable"
        return check

    for text in corpus:
        cases.append(TestCase(f"parse/render {text}", Tier.SOFTWARE, roundtrip(text), "Parse"))
    return cases


def _ontology_cases(tbox: TBox) -> list:
    cases = [
        TestCase("band?(HumanChromosomeBand)", Tier.ONTOLOGY,
                 lambda ctx: ctx.band(B.BAND_ROOT), "Human"),
        TestCase("not band?(HumanChromosome1)", Tier.ONTOLOGY,
                 lambda ctx: not ctx.band(B.chromosome_class("1")), "Human"),
    ]
    for name in sorted(tbox.classes):
        if name.startswith("HumanChromosome") and "Band" in name and name != B.BAND_ROOT:
            cases.append(TestCase(f"band?({name})", Tier.ONTOLOGY,
                                  lambda ctx, n=name: ctx.band(n), "Bands"))
    for c in B.CHROMOSOMES:
        chrom = B.chromosome_class(c)
        want = K.SEX_CHROMOSOME if c in ("X", "Y") else K.AUTOSOME
        cases.append(TestCase(f"{chrom} told under {want}", Tier.ONTOLOGY,
                              lambda ctx, chrom=chrom, want=want: want in ctx.tbox.told_parents().get(chrom, ()),
                              "Human"))
    return cases


def _reasoner_cases() -> list:
    cases = [
        TestCase("consistent", Tier.REASONER, lambda ctx: ctx.consistent(), "Base"),
        TestCase("coherent", Tier.REASONER, lambda ctx: ctx.coherent(), "Base"),
    ]
    for facet, base in K.FACETS.items():
        cases.append(TestCase(f"isuperclass({base}, {facet})", Tier.REASONER,
                              lambda ctx, b=base, f=facet: ctx.isuperclass(b, f), "Karyotype"))
    cases.append(TestCase("k46_XN is not MaleKaryotype", Tier.REASONER,
                          lambda ctx: not ctx.isuperclass("k46_XN", "MaleKaryotype"), "Karyotype"))
    return cases


def _probe_cases(tbox: TBox, random_karyotypes=()) -> list:
    def under(*parents):
        return (Class("_"),) + tuple(SubClassOf(Named("_"), Named(p)) for p in parents)

    cases = [
        TestCase("probe under HumanAutosome and HumanSexChromosome is incoherent", Tier.PROBE,
                 lambda ctx: not ctx.coherent(), "Probes",
                 probe=under(K.AUTOSOME, K.SEX_CHROMOSOME)),
        TestCase("probe under HumanChromosome1 and HumanChromosomeX is incoherent", Tier.PROBE,
                 lambda ctx: not ctx.coherent(), "Probes",
                 probe=under(B.chromosome_class("1"), B.chromosome_class("X"))),
        TestCase("probe derived from k46_XY is a MaleKaryotype", Tier.PROBE,
                 lambda ctx: ctx.isuperclass("_", "MaleKaryotype") and ctx.coherent(), "Probes",
                 probe=(Class("_"), SubClassOf(Named("_"), Some(K.DERIVED_FROM, Named("k46_XY"))))),
    ]
    for k in random_karyotypes:
        name = K.karyotype_class(k)
        if name in tbox.classes:
            continue
        cases.append(TestCase(f"random karyotype {iscn.render(k)} keeps the ontology coherent",
                              Tier.PROBE,
                              lambda ctx, n=name: ctx.coherent() and ctx.isuperclass(n, K.KARYOTYPE),
                              "Random", probe=tuple(K.karyotype_additions(k, tbox))))
    return cases


def _random_cases(seeds, band_labels) -> tuple:
    """Round-trip cases and probe-ready karyotypes from seeded generation."""
    bounds = iscn.KaryotypeBounds(min_total=40, max_total=50, max_sex=3, max_events=3,
                                  bands=band_labels)
    cases, karyotypes = [], []
    for seed in seeds:
        k = iscn.random_karyotype(seed, bounds)
        karyotypes.append(k)
        cases.append(TestCase(f"random seed {seed} round-trips", Tier.SOFTWARE,
                              lambda ctx, k=k: iscn.parse(iscn.render(k)) == k, "Random"))
    return cases, karyotypes


def band_labels(tbox: TBox) -> dict:
    labels = {}
    for c in B.CHROMOSOMES:
        prefix = B.band_class(c, "")
        labels[c] = [n[len(prefix):] for n in tbox.classes
                     if n.startswith(prefix) and n[len(prefix):][1:2].isdigit()]
    return labels


def standard_suite(tbox: TBox, table: FacetTable = None, corpus=(),
                   random_seeds=range(15), random_probes=3) -> list:
    """The full suite: structural, facet-driven, probe and random cases."""
    rnd_cases, rnd_karyotypes = _random_cases(random_seeds, band_labels(tbox))
    cases = _software_cases(corpus) + rnd_cases
    cases += _ontology_cases(tbox)
    cases += _reasoner_cases()
    if table is not None:
        cases += assertions_from(table, tbox)
    cases += _probe_cases(tbox, rnd_karyotypes[:random_probes])
    return cases
