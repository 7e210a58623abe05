"""EL+ concepts and axioms, the TBox store, probe entities and a line format.

A :class:`TBox` is built by a single writer through :meth:`TBox.declare` and
:meth:`TBox.add`.  Temporary probe entities are added with
:meth:`TBox.probe` (or :func:`with_probe`); the store is restored from a
snapshot on exit whatever the body did.
"""

from __future__ import annotations

import hashlib
import json
import re
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .errors import FormatError, KindClash, UnknownEntity

CLASS = "class"
ROLE = "role"

#: Prefix reserved for names minted by the reasoner's normaliser.
FRESH_PREFIX = "_:"
#: Names used for Top and Bottom in classification results.
THING = "owl:Thing"
NOTHING = "owl:Nothing"
RESERVED = {THING, NOTHING}


# -- concepts ---------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "Top"


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "Bottom"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Named:
    name: str

    def __str__(self):
        return _name(self.name)


@dataclass(frozen=True)
class And:
    operands: tuple

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) < 2:
            raise ValueError("And needs at least two operands")
        if len(set(self.operands)) != len(self.operands):
            raise ValueError("And operands must be distinct")

    def __str__(self):
        return "(and " + " ".join(str(c) for c in self.operands) + ")"


@dataclass(frozen=True)
class Some:
    role: str
    filler: "Concept"

    def __str__(self):
        return f"(some {_name(self.role)} {self.filler})"


Concept = Union[Top, Bottom, Named, And, Some]


def conj(*concepts: Concept) -> Concept:
    """Conjunction with duplicates dropped; a single operand is returned as is."""
    ops = tuple(dict.fromkeys(concepts))
    if not ops:
        return TOP
    if len(ops) == 1:
        return ops[0]
    return And(ops)


def concept_names(c: Concept) -> tuple[set, set]:
    """Class names and role names mentioned in ``c``."""
    classes, roles = set(), set()
    stack = [c]
    while stack:
        c = stack.pop()
        if isinstance(c, Named):
            classes.add(c.name)
        elif isinstance(c, And):
            stack.extend(c.operands)
        elif isinstance(c, Some):
            roles.add(c.role)
            stack.append(c.filler)
    return classes, roles


# -- axioms -----------------------------------------------------------------


@dataclass(frozen=True)
class SubClassOf:
    sub: Concept
    sup: Concept

    def __str__(self):
        return f"SubClassOf: {self.sub} {self.sup}"


@dataclass(frozen=True)
class EquivalentTo:
    name: str
    concept: Concept

    def __str__(self):
        return f"EquivalentTo: {_name(self.name)} {self.concept}"


@dataclass(frozen=True)
class DisjointWith:
    first: str
    second: str

    def __str__(self):
        return f"DisjointWith: {_name(self.first)} {_name(self.second)}"


@dataclass(frozen=True)
class TransitiveRole:
    role: str

    def __str__(self):
        return f"Transitive: {_name(self.role)}"


@dataclass(frozen=True)
class SubRoleOf:
    sub: str
    sup: str

    def __str__(self):
        return f"SubRoleOf: {_name(self.sub)} {_name(self.sup)}"


Axiom = Union[SubClassOf, EquivalentTo, DisjointWith, TransitiveRole, SubRoleOf]


def axiom_signature(a: Axiom) -> tuple[set, set]:
    """Class and role names an axiom refers to."""
    if isinstance(a, SubClassOf):
        c1, r1 = concept_names(a.sub)
        c2, r2 = concept_names(a.sup)
        return c1 | c2, r1 | r2
    if isinstance(a, EquivalentTo):
        c, r = concept_names(a.concept)
        return c | {a.name}, r
    if isinstance(a, DisjointWith):
        return {a.first, a.second}, set()
    if isinstance(a, TransitiveRole):
        return set(), {a.role}
    if isinstance(a, SubRoleOf):
        return set(), {a.sub, a.sup}
    raise TypeError(f"not an axiom: {a!r}")


@dataclass(frozen=True)
class Declaration:
    kind: str
    name: str


def Class(name: str) -> Declaration:
    return Declaration(CLASS, name)


def Role(name: str) -> Declaration:
    return Declaration(ROLE, name)


# -- the store --------------------------------------------------------------


class TBox:
    """Named classes, roles and axioms, plus a revision counter."""

    def __init__(self, name: str = "ontology"):
        self.name = name
        self.classes: set[str] = set()
        self.roles: set[str] = set()
        self.axioms: list = []
        self._axiom_set: set = set()
        self.generation = 0

    def __repr__(self):
        return (
            f"TBox({self.name!r}, classes={len(self.classes)}, "
            f"roles={len(self.roles)}, axioms={len(self.axioms)})"
        )

    def declare(self, kind: str, name: str) -> "TBox":
        if not isinstance(name, str) or not name:
            raise ValueError("entity names must be non-empty strings")
        if name.startswith(FRESH_PREFIX) or name in RESERVED:
            raise ValueError(f"{name!r} is a reserved name")
        if kind == CLASS:
            mine, other = self.classes, self.roles
        elif kind == ROLE:
            mine, other = self.roles, self.classes
        else:
            raise ValueError(f"unknown entity kind {kind!r}")
        if name in other:
            raise KindClash(f"{name!r} is already declared as a {'role' if kind == CLASS else 'class'}")
        if name not in mine:
            mine.add(name)
            self.generation += 1
        return self

    def declare_class(self, *names: str) -> "TBox":
        for n in names:
            self.declare(CLASS, n)
        return self

    def declare_role(self, *names: str) -> "TBox":
        for n in names:
            self.declare(ROLE, n)
        return self

    def add(self, axiom: Axiom) -> "TBox":
        classes, roles = axiom_signature(axiom)
        missing = sorted(classes - self.classes) + sorted(roles - self.roles)
        if missing:
            raise UnknownEntity(f"undeclared entity {missing[0]!r} in {axiom}")
        if axiom not in self._axiom_set:
            self._axiom_set.add(axiom)
            self.axioms.append(axiom)
            self.generation += 1
        return self

    def apply(self, additions: Iterable) -> "TBox":
        """Declare every :class:`Declaration` then assert every axiom."""
        additions = list(additions)
        for item in additions:
            if isinstance(item, Declaration):
                self.declare(item.kind, item.name)
        for item in additions:
            if not isinstance(item, Declaration):
                self.add(item)
        return self

    def copy(self) -> "TBox":
        other = TBox(self.name)
        other.classes = set(self.classes)
        other.roles = set(self.roles)
        other.axioms = list(self.axioms)
        other._axiom_set = set(self._axiom_set)
        return other

    @contextmanager
    def probe(self, additions: Iterable = ()):
        """Temporarily extend the store; restores the prior state on exit."""
        snapshot = (set(self.classes), set(self.roles), list(self.axioms))
        try:
            self.apply(additions)
            yield self
        finally:
            self.classes, self.roles, axioms = snapshot
            self.axioms = axioms
            self._axiom_set = set(axioms)
            self.generation += 1

    def told_parents(self) -> dict[str, set[str]]:
        """Named classes directly asserted above each class (no reasoning)."""
        cached = getattr(self, "_told", None)
        if cached is not None and cached[0] == self.generation:
            return cached[1]
        parents: dict[str, set[str]] = {}
        for a in self.axioms:
            if isinstance(a, SubClassOf) and isinstance(a.sub, Named):
                sups = a.sup.operands if isinstance(a.sup, And) else (a.sup,)
                named = {s.name for s in sups if isinstance(s, Named)}
                if named:
                    parents.setdefault(a.sub.name, set()).update(named)
        self._told = (self.generation, parents)
        return parents

def declare(tbox: TBox, kind: str, name: str) -> TBox:
    return tbox.declare(kind, name)


def assert_axiom(tbox: TBox, axiom: Axiom) -> TBox:
    return tbox.add(axiom)


def with_probe(tbox: TBox, additions: Iterable, body: Callable[[TBox], object]):
    """Run ``body(tbox)`` with ``additions`` in place, then revert them."""
    with tbox.probe(additions):
        return body(tbox)


# -- serialisation ----------------------------------------------------------

_BARE = re.compile(r'[^\s()"]+')
_KEYWORDS = {"Top", "Bottom"}


def _name(name: str) -> str:
    if _BARE.fullmatch(name) and name not in _KEYWORDS:
        return name
    return json.dumps(name, ensure_ascii=False)


def serialize(tbox: TBox) -> str:
    lines = [f"Ontology: {_name(tbox.name)}"]
    lines += sorted(f"Class: {_name(c)}" for c in tbox.classes)
    lines += sorted(f"Role: {_name(r)}" for r in tbox.roles)
    lines += sorted(str(a) for a in tbox.axioms)
    return "\n".join(lines) + "\n"


def snapshot_digest(tbox: TBox) -> str:
    """SHA-256 over the canonical serialisation; ignores assertion order."""
    return hashlib.sha256(serialize(tbox).encode("utf-8")).hexdigest()


_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"\\]|\\.)*")|([^\s()"]+))')


def _tokens(text: str, lineno: int) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormatError(f"cannot tokenise near {text[pos:pos + 10]!r}", lineno)
        pos = m.end()
        if m.group(1):
            out.append("(")
        elif m.group(2):
            out.append(")")
        elif m.group(3):
            out.append(("str", json.loads(m.group(3))))
        else:
            out.append(("atom", m.group(4)))
    return out


class _Reader:
    def __init__(self, tokens, lineno):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno

    def fail(self, what):
        raise FormatError(f"expected {what}", self.lineno)

    def next(self):
        if self.pos >= len(self.tokens):
            self.fail("more tokens")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def name(self):
        tok = self.next()
        if not isinstance(tok, tuple):
            self.fail("a name")
        return tok[1]

    def concept(self):
        tok = self.next()
        if tok == "(":
            head = self.next()
            if head == ("atom", "and"):
                ops = []
                while self.tokens[self.pos:self.pos + 1] != [")"]:
                    ops.append(self.concept())
                self.next()
                try:
                    return And(tuple(ops))
                except ValueError as e:
                    raise FormatError(str(e), self.lineno) from None
            if head == ("atom", "some"):
                role = self.name()
                filler = self.concept()
                if self.next() != ")":
                    self.fail("')'")
                return Some(role, filler)
            self.fail("'and' or 'some'")
        if tok == ")":
            self.fail("a concept")
        kind, value = tok
        if kind == "atom" and value == "Top":
            return TOP
        if kind == "atom" and value == "Bottom":
            return BOTTOM
        return Named(value)

    def done(self):
        if self.pos != len(self.tokens):
            self.fail("end of line")


def deserialize(text: str) -> TBox:
    tbox = None
    pending = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            continue
        keyword, sep, rest = line.partition(": ")
        if not sep:
            raise FormatError(f"missing ': ' in {line!r}", lineno)
        r = _Reader(_tokens(rest, lineno), lineno)
        if keyword == "Ontology":
            if tbox is not None:
                raise FormatError("duplicate Ontology header", lineno)
            tbox = TBox(r.name())
            r.done()
            continue
        if tbox is None:
            raise FormatError("missing Ontology header", lineno)
        if keyword == "Class":
            item = Class(r.name())
        elif keyword == "Role":
            item = Role(r.name())
        elif keyword == "SubClassOf":
            item = SubClassOf(r.concept(), r.concept())
        elif keyword == "EquivalentTo":
            item = EquivalentTo(r.name(), r.concept())
        elif keyword == "DisjointWith":
            item = DisjointWith(r.name(), r.name())
        elif keyword == "Transitive":
            item = TransitiveRole(r.name())
        elif keyword == "SubRoleOf":
            item = SubRoleOf(r.name(), r.name())
        else:
            raise FormatError(f"unknown statement {keyword!r}", lineno)
        r.done()
        pending.append((lineno, item))
    if tbox is None:
        raise FormatError("empty document: missing Ontology header", 1)
    for lineno, item in pending:
        if isinstance(item, Declaration):
            try:
                tbox.declare(item.kind, item.name)
            except (KindClash, ValueError) as e:
                raise FormatError(str(e), lineno) from None
    for lineno, item in pending:
        if not isinstance(item, Declaration):
            try:
                tbox.add(item)
            except UnknownEntity as e:
                raise FormatError(str(e), lineno) from None
    return tbox
