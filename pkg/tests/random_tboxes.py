"""Seeded random EL+ TBoxes for the classifier property tests."""

import random

from karyotest.ontology import (
    BOTTOM,
    TOP,
    DisjointWith,
    EquivalentTo,
    Named,
    Some,
    SubClassOf,
    SubRoleOf,
    TBox,
    TransitiveRole,
    conj,
)

MAX_CLASSES, MAX_ROLES, MAX_AXIOMS = 8, 3, 15


def _concept(rng, classes, roles, depth):
    roll = rng.random()
    if depth == 0 or roll < 0.45:
        pick = rng.random()
        if pick < 0.015:
            return BOTTOM
        if pick < 0.06:
            return TOP
        return Named(rng.choice(classes))
    if roll < 0.7 or not roles:
        n = rng.randint(2, 3)
        return conj(*(_concept(rng, classes, roles, depth - 1) for _ in range(n)))
    return Some(rng.choice(roles), _concept(rng, classes, roles, depth - 1))


def random_tbox(seed):
    rng = random.Random(seed)
    classes = [f"C{i}" for i in range(rng.randint(1, MAX_CLASSES))]
    roles = [f"r{i}" for i in range(rng.randint(0, MAX_ROLES))]
    t = TBox(f"random{seed}")
    t.declare_class(*classes)
    t.declare_role(*roles)
    for _ in range(rng.randint(0, MAX_AXIOMS)):
        kind = rng.random()
        if kind < 0.55:
            ax = SubClassOf(_concept(rng, classes, roles, 2), _concept(rng, classes, roles, 2))
        elif kind < 0.75:
            ax = EquivalentTo(rng.choice(classes), _concept(rng, classes, roles, 2))
        elif kind < 0.80:
            ax = DisjointWith(rng.choice(classes), rng.choice(classes))
        elif roles and kind < 0.92:
            ax = TransitiveRole(rng.choice(roles))
        elif roles:
            ax = SubRoleOf(rng.choice(roles), rng.choice(roles))
        else:
            continue
        t.add(ax)
    return t
