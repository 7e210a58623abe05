"""Normalisation and worklist saturation for the EL+ fragment.

Normal forms, with A, B named classes, fresh names, Top or Bottom::

    A ⊑ B        A1 ⊓ A2 ⊑ B        A ⊑ ∃r.B        ∃r.B ⊑ A
    r transitive                    r ⊑ s
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import count

from .errors import UnknownEntity
from .ontology import (
    FRESH_PREFIX,
    NOTHING,
    THING,
    And,
    Bottom,
    DisjointWith,
    EquivalentTo,
    Named,
    Some,
    SubClassOf,
    SubRoleOf,
    TBox,
    Top,
    TransitiveRole,
)

# -- normal axioms ----------------------------------------------------------


@dataclass(frozen=True)
class Sub:
    sub: str
    sup: str


@dataclass(frozen=True)
class ConjSub:
    left: str
    right: str
    sup: str


@dataclass(frozen=True)
class SubSome:
    sub: str
    role: str
    filler: str


@dataclass(frozen=True)
class SomeSub:
    role: str
    filler: str
    sup: str


@dataclass(frozen=True)
class Transitive:
    role: str


@dataclass(frozen=True)
class RoleSub:
    sub: str
    sup: str


def _atom(c):
    if isinstance(c, Named):
        return c.name
    if isinstance(c, Top):
        return THING
    if isinstance(c, Bottom):
        return NOTHING
    return None


class _Normalizer:
    def __init__(self):
        self.out = []
        self._ids = count(1)

    def fresh(self) -> str:
        return f"{FRESH_PREFIX}{next(self._ids)}"

    def emit(self, ax):
        self.out.append(ax)

    def left_atom(self, c) -> str:
        """A name N with c ⊑ N entailed, and N ⊑ c whenever N is used on the left."""
        a = _atom(c)
        if a is not None:
            return a
        x = self.fresh()
        self.lhs(c, x)
        return x

    def right_atom(self, c) -> str:
        a = _atom(c)
        if a is not None:
            return a
        x = self.fresh()
        self.rhs(x, c)
        return x

    def lhs(self, c, sup: str):
        """Normalise c ⊑ sup where sup is atomic."""
        a = _atom(c)
        if a is not None:
            if a != NOTHING:
                self.emit(Sub(a, sup))
        elif isinstance(c, And):
            ops = [self.left_atom(o) for o in c.operands]
            acc = ops[0]
            for i, o in enumerate(ops[1:], 1):
                target = sup if i == len(ops) - 1 else self.fresh()
                self.emit(ConjSub(acc, o, target))
                acc = target
        elif isinstance(c, Some):
            self.emit(SomeSub(c.role, self.left_atom(c.filler), sup))
        else:
            raise TypeError(f"not a concept: {c!r}")

    def rhs(self, sub: str, c):
        """Normalise sub ⊑ c where sub is atomic."""
        a = _atom(c)
        if a is not None:
            if a != THING:
                self.emit(Sub(sub, a))
        elif isinstance(c, And):
            for o in c.operands:
                self.rhs(sub, o)
        elif isinstance(c, Some):
            self.emit(SubSome(sub, c.role, self.right_atom(c.filler)))
        else:
            raise TypeError(f"not a concept: {c!r}")

    def subclass(self, sub, sup):
        a = _atom(sub)
        if a is not None:
            if a != NOTHING:
                self.rhs(a, sup)
            return
        b = _atom(sup)
        if b is not None:
            self.lhs(sub, b)
            return
        x = self.fresh()
        self.lhs(sub, x)
        self.rhs(x, sup)

    def axiom(self, ax):
        if isinstance(ax, SubClassOf):
            self.subclass(ax.sub, ax.sup)
        elif isinstance(ax, EquivalentTo):
            self.subclass(Named(ax.name), ax.concept)
            self.subclass(ax.concept, Named(ax.name))
        elif isinstance(ax, DisjointWith):
            self.emit(ConjSub(ax.first, ax.second, NOTHING))
        elif isinstance(ax, TransitiveRole):
            self.emit(Transitive(ax.role))
        elif isinstance(ax, SubRoleOf):
            self.emit(RoleSub(ax.sub, ax.sup))
        else:
            raise TypeError(f"not an axiom: {ax!r}")


def normalize(tbox: TBox) -> list:
    """Normal-form axioms for ``tbox``; fresh names use the reserved prefix.

    Axioms are processed in canonical (sorted) order so fresh names do not
    depend on assertion order.
    """
    n = _Normalizer()
    for ax in sorted(tbox.axioms, key=str):
        n.axiom(ax)
    return n.out


# -- classification ---------------------------------------------------------


@dataclass(frozen=True)
class SubsumptionMap:
    """Entailed named superclasses per declared class, and role pairs.

    ``supers[C]`` always holds C and owl:Thing; an unsatisfiable class holds
    owl:Nothing and, by convention, every other name too.  ``roles[r]`` holds
    the pairs (C, D) of visible names with C satisfiable and C ⊑ ∃r.D.
    """

    classes: frozenset
    supers: dict
    roles: dict

    def __getitem__(self, name):
        return self.supers[name]


def _saturate(axioms, nodes, role_names):
    """Worklist completion over normal axioms.  Returns (S, R) over all nodes."""
    told = defaultdict(list)
    conj = defaultdict(list)
    exist_right = defaultdict(list)
    exist_left = defaultdict(list)  # filler -> [(role, sup)]
    role_up = defaultdict(set)
    transitive = set()
    for ax in axioms:
        if isinstance(ax, Sub):
            told[ax.sub].append(ax.sup)
        elif isinstance(ax, ConjSub):
            conj[ax.left].append((ax.right, ax.sup))
            conj[ax.right].append((ax.left, ax.sup))
        elif isinstance(ax, SubSome):
            exist_right[ax.sub].append((ax.role, ax.filler))
        elif isinstance(ax, SomeSub):
            exist_left[ax.filler].append((ax.role, ax.sup))
        elif isinstance(ax, Transitive):
            transitive.add(ax.role)
        elif isinstance(ax, RoleSub):
            role_up[ax.sub].add(ax.sup)

    S = {a: set() for a in nodes}
    succ = defaultdict(lambda: defaultdict(set))
    pred = defaultdict(lambda: defaultdict(set))
    queue = deque()
    for a in nodes:
        queue.append((0, a, a))
        queue.append((0, a, THING))

    while queue:
        item = queue.popleft()
        if item[0] == 0:
            _, a, x = item
            sa = S[a]
            if x in sa:
                continue
            sa.add(x)
            for b in told.get(x, ()):
                queue.append((0, a, b))
            for other, b in conj.get(x, ()):
                if other in sa:
                    queue.append((0, a, b))
            for r, b in exist_right.get(x, ()):
                queue.append((1, r, a, b))
            for r, b in exist_left.get(x, ()):
                for c in pred[r].get(a, ()):
                    queue.append((0, c, b))
            if x == NOTHING:
                for r in list(pred):
                    for c in pred[r].get(a, ()):
                        queue.append((0, c, NOTHING))
        else:
            _, r, a, b = item
            if b in succ[r][a]:
                continue
            succ[r][a].add(b)
            pred[r][b].add(a)
            for s in role_up.get(r, ()):
                queue.append((1, s, a, b))
            sb = S[b]
            for x in sb:
                for r2, d in exist_left.get(x, ()):
                    if r2 == r:
                        queue.append((0, a, d))
            if NOTHING in sb:
                queue.append((0, a, NOTHING))
            if r in transitive:
                for c in list(pred[r].get(a, ())):
                    queue.append((1, r, c, b))
                for d in list(succ[r].get(b, ())):
                    queue.append((1, r, a, d))

    R = {r: {(a, b) for a, bs in succ[r].items() for b in bs} for r in role_names | set(succ)}
    return S, R


def finish_map(classes, S, R, role_names) -> SubsumptionMap:
    """Project raw saturation results onto user names (shared output convention)."""
    visible = set(classes) | {THING, NOTHING}
    everything = frozenset(visible)
    supers = {}
    for c in sorted(visible):
        s = S[c]
        supers[c] = everything if NOTHING in s else frozenset(s & visible)
    # (C, D) is listed when C ⊑ ∃r.D is entailed: some r-successor of C,
    # fresh or not, has D among its subsumers.  An unsatisfiable C entails
    # every pair, so only satisfiable sources are listed.
    roles = {}
    for r in sorted(role_names):
        pairs = set()
        for a, e in R.get(r, ()):
            if a in visible and NOTHING not in S[a]:
                pairs.update((a, d) for d in S[e] & visible)
        roles[r] = frozenset(pairs)
    return SubsumptionMap(frozenset(classes), supers, roles)


def classify(tbox: TBox) -> SubsumptionMap:
    axioms = normalize(tbox)
    nodes = set(tbox.classes) | {THING, NOTHING}
    for ax in axioms:
        if isinstance(ax, Sub):
            nodes.update((ax.sub, ax.sup))
        elif isinstance(ax, ConjSub):
            nodes.update((ax.left, ax.right, ax.sup))
        elif isinstance(ax, SubSome):
            nodes.update((ax.sub, ax.filler))
        elif isinstance(ax, SomeSub):
            nodes.update((ax.filler, ax.sup))
    S, R = _saturate(axioms, nodes, set(tbox.roles))
    return finish_map(tbox.classes, S, R, tbox.roles)


def _check(smap: SubsumptionMap, *names):
    for n in names:
        if n not in smap.supers:
            raise UnknownEntity(f"undeclared class {n!r}")


def isuperclass(smap: SubsumptionMap, sub: str, sup: str) -> bool:
    _check(smap, sub, sup)
    return sup in smap.supers[sub]


def coherent(smap: SubsumptionMap) -> bool:
    """No declared class is unsatisfiable (fresh names are not considered)."""
    return not any(NOTHING in smap.supers[c] for c in smap.classes)


def consistent(smap: SubsumptionMap) -> bool:
    return NOTHING not in smap.supers[THING]


def unsatisfiable(smap: SubsumptionMap) -> list[str]:
    return sorted(c for c in smap.classes if NOTHING in smap.supers[c])
