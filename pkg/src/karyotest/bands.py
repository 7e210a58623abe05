"""Chromosome band trees and the band class hierarchy generated from them.

A band tree lists the bands of each arm; a nested list names a parent band
followed by its sub-bands, e.g. ``["p10", ["p11", "p11.1", "p11.2"]]``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ArmMismatch, DuplicateBand, FormatError, UnknownEntity
from .ontology import TBox

CHROMOSOMES = tuple([str(i) for i in range(1, 23)] + ["X", "Y"])

BAND_ROOT = "HumanChromosomeBand"
IS_BAND_OF = "isBandOf"

_LABEL = re.compile(r"[pq]\d+(\.\d+)?")


def chromosome_class(chromosome: str) -> str:
    return f"HumanChromosome{chromosome}"


def band_class(chromosome: str, label: str) -> str:
    return f"HumanChromosome{chromosome}Band{label}"


def arm_class(chromosome: str, arm: str) -> str:
    # the arm is the coarsest "label" of its bands, so it shares their naming
    return band_class(chromosome, arm)


def chromosome_band_class(chromosome: str) -> str:
    return band_class(chromosome, "")


@dataclass(frozen=True)
class BandTree:
    chromosome: str
    p: list = field(default_factory=list)
    q: list = field(default_factory=list)

    def arms(self):
        return (("p", self.p), ("q", self.q))


@dataclass
class ClassBatch:
    """Classes and links produced from one or more band trees.

    ``subclass_axioms`` are (child, parent) pairs; ``role_axioms`` are
    (band, role, chromosome) triples.  The root classes are the fixed
    scaffolding (chromosome, chromosome band and arm classes) that the
    batch hangs off.
    """

    declarations: list = field(default_factory=list)
    subclass_axioms: list = field(default_factory=list)
    role_axioms: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    root_axioms: list = field(default_factory=list)

    def __add__(self, other: "ClassBatch") -> "ClassBatch":
        roots = list(dict.fromkeys(self.roots + other.roots))
        root_axioms = list(dict.fromkeys(self.root_axioms + other.root_axioms))
        return ClassBatch(
            self.declarations + other.declarations,
            self.subclass_axioms + other.subclass_axioms,
            self.role_axioms + other.role_axioms,
            roots,
            root_axioms,
        )


def _walk(entries, parent, out):
    """Yield (label, parent_label) for every label under ``entries``."""
    for entry in entries:
        if isinstance(entry, str):
            out.append((entry, parent))
        elif isinstance(entry, (list, tuple)) and entry and isinstance(entry[0], str):
            head = entry[0]
            out.append((head, parent))
            _walk(entry[1:], head, out)
        else:
            raise FormatError(f"bad band entry {entry!r}")
    return out


def expand_band_tree(spec: BandTree) -> ClassBatch:
    c = spec.chromosome
    if c not in CHROMOSOMES:
        raise ValueError(f"unknown chromosome {c!r}")
    chrom = chromosome_class(c)
    chrom_band = chromosome_band_class(c)
    batch = ClassBatch(
        roots=[BAND_ROOT, chrom, chrom_band, arm_class(c, "p"), arm_class(c, "q")],
        root_axioms=[
            (chrom_band, BAND_ROOT),
            (arm_class(c, "p"), chrom_band),
            (arm_class(c, "q"), chrom_band),
        ],
    )
    seen = set()
    for arm, entries in spec.arms():
        for label, parent in _walk(entries, None, []):
            if not _LABEL.fullmatch(label) or label[0] != arm:
                raise ArmMismatch(f"band {label!r} listed on the {arm} arm of chromosome {c}")
            if label in seen:
                raise DuplicateBand(f"band {label!r} appears twice on chromosome {c}")
            if parent is not None and not _extends(label, parent):
                raise FormatError(f"sub-band {label!r} does not extend {parent!r}")
            seen.add(label)
            name = band_class(c, label)
            batch.declarations.append(name)
            up = arm_class(c, arm) if parent is None else band_class(c, parent)
            batch.subclass_axioms.append((name, up))
            batch.role_axioms.append((name, IS_BAND_OF, chrom))
    return batch


def _extends(child: str, parent: str) -> bool:
    if "." in parent:
        return child.startswith(parent) and child[len(parent):].isdigit()
    return child.startswith(parent + ".") and child[len(parent) + 1:].isdigit()


def parse_band_document(doc) -> list[BandTree]:
    if not isinstance(doc, list):
        raise FormatError("band file must hold a list of chromosome entries")
    trees = []
    for i, row in enumerate(doc):
        if not isinstance(row, dict) or "chromosome" not in row:
            raise FormatError(f"entry {i} lacks a 'chromosome' key")
        extra = set(row) - {"chromosome", "p", "q"}
        if extra:
            raise FormatError(f"entry {i} has unexpected keys {sorted(extra)}")
        p, q = row.get("p", []), row.get("q", [])
        if not isinstance(p, list) or not isinstance(q, list):
            raise FormatError(f"entry {i}: arms must be lists")
        trees.append(BandTree(str(row["chromosome"]), p, q))
    return trees


def load_band_file(path) -> list[BandTree]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e.msg}", e.lineno) from None
    return parse_band_document(doc)


def bundled_band_file(which: str = "full") -> Path:
    """Path of a bundled band table: ``"full"`` or ``"fragment"``."""
    return Path(str(resources.files("karyotest") / "data" / f"bands_{which}.json"))


def expand_all(trees) -> ClassBatch:
    batch = ClassBatch()
    seen = set()
    for tree in trees:
        if tree.chromosome in seen:
            raise DuplicateBand(f"chromosome {tree.chromosome} listed twice")
        seen.add(tree.chromosome)
        batch = batch + expand_band_tree(tree)
    return batch


def str_pband(label: str) -> bool:
    """True when the text after the first ``Band`` starts with ``p``."""
    _, found, rest = label.partition("Band")
    return bool(found) and rest.startswith("p")


def str_qband(label: str) -> bool:
    _, found, rest = label.partition("Band")
    return bool(found) and rest.startswith("q")


def is_band(tbox: TBox, name: str) -> bool:
    """Structural check: ``name`` reaches HumanChromosomeBand via told subclass links."""
    if name not in tbox.classes:
        raise UnknownEntity(f"undeclared class {name!r}")
    parents = tbox.told_parents()
    seen, stack = set(), [name]
    while stack:
        c = stack.pop()
        if c == BAND_ROOT:
            return True
        if c in seen:
            continue
        seen.add(c)
        stack.extend(parents.get(c, ()))
    return False
