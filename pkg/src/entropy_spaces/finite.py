"""Explicit finite cover spaces given by tables, plus hand-built fixtures."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional

from .core import CoverSpace, MapClass, SelfMap


def transitive_closure(elements: Iterable, pairs: Iterable[tuple]) -> frozenset:
    """Reflexive-transitive closure of a relation on ``elements``."""
    elements = list(elements)
    rel = {(a, a) for a in elements} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return frozenset(rel)


def explicit_space(
    name: str,
    elements: Iterable[Hashable],
    relation: Iterable[tuple],
    meet: Mapping[tuple, Hashable],
    norms: Mapping[Hashable, float],
    unit: Optional[Hashable] = None,
    meet_space: bool = False,
    commutative: bool = False,
    close: bool = False,
) -> CoverSpace:
    """A cover space given by a relation set, a full meet table and norms.

    ``relation`` holds pairs ``(a, b)`` meaning ``a ≺ b``.  It is used as is
    unless ``close`` asks for the reflexive-transitive closure, so broken
    fixtures stay broken.
    """
    elems = tuple(elements)
    rel = transitive_closure(elems, relation) if close else frozenset(relation)
    table = dict(meet)
    missing = [p for p in itertools.product(elems, repeat=2) if p not in table]
    if missing:
        raise ValueError(f"meet table of {name!r} misses {missing[0]!r}")
    h = {a: float(norms[a]) for a in elems}
    members = frozenset(elems)
    return CoverSpace(
        name=name,
        refines=lambda a, b: (a, b) in rel,
        meet=lambda a, b: table[(a, b)],
        norm=lambda a: h[a],
        unit=unit,
        elements=elems,
        meet_space=meet_space,
        commutative=commutative,
        contains=lambda a: a in members,
    )


def explicit_map(
    space: CoverSpace,
    table: Mapping[Hashable, Hashable],
    declared_class: MapClass,
    name: str = "λ",
    inverse: Optional[Mapping] = None,
) -> SelfMap:
    t = dict(table)
    if space.elements is not None and set(t) != set(space.elements):
        raise ValueError("map table must cover every element")
    inv = dict(inverse) if inverse is not None else None
    return SelfMap(
        apply=lambda a: t[a],
        declared_class=declared_class,
        name=name,
        inverse_apply=(lambda a: inv[a]) if inv is not None else None,
        unital=space.unit is not None and t.get(space.unit) == space.unit,
    )


def set_family_space(
    name: str,
    sets: Iterable[frozenset],
    weights: Mapping[Hashable, float],
) -> CoverSpace:
    """Union-closed family ordered by reverse inclusion with additive norm.

    ``α ≺ β`` iff ``β ⊆ α``; the meet is the union; ``h(α) = Σ_{x∈α} w(x)``.
    These are meet entropy spaces (the norm is additive over disjoint parts,
    hence subadditive over unions).
    """
    fam = tuple(sorted(set(sets), key=lambda s: (len(s), sorted(s))))
    members = frozenset(fam)
    for a, b in itertools.product(fam, repeat=2):
        if a | b not in members:
            raise ValueError(f"family {name!r} is not union-closed")
    w = dict(weights)
    empty = frozenset()
    return CoverSpace(
        name=name,
        refines=lambda a, b: b <= a,
        meet=lambda a, b: a | b,
        norm=lambda a: float(sum(w[x] for x in a)),
        unit=empty if empty in members else None,
        elements=fam,
        meet_space=True,
        commutative=True,
        contains=lambda a: a in members,
    )


# -- fixtures ---------------------------------------------------------------

F1_ELEMENTS = ("top", "x", "y", "bot")
_F1_SETS = {"top": frozenset(), "x": frozenset({0}), "y": frozenset({1}), "bot": frozenset({0, 1})}
_F1_NAMES = {v: k for k, v in _F1_SETS.items()}


def _f1_tables():
    rel = {(a, b) for a in F1_ELEMENTS for b in F1_ELEMENTS if _F1_SETS[b] <= _F1_SETS[a]}
    meet = {(a, b): _F1_NAMES[_F1_SETS[a] | _F1_SETS[b]] for a in F1_ELEMENTS for b in F1_ELEMENTS}
    norms = {"top": 0.0, "x": math.log(2), "y": math.log(3), "bot": math.log(6)}
    return rel, meet, norms


def fixture_f1() -> CoverSpace:
    """Four-element valid meet entropy space with unit ``top``."""
    rel, meet, norms = _f1_tables()
    return explicit_space("F1", F1_ELEMENTS, rel, meet, norms, unit="top", meet_space=True, commutative=True)


def fixture_f2() -> CoverSpace:
    """F1 without the edge ``bot ≺ x``; the meet ``x ∧ y = bot`` then breaks [C1]."""
    rel, meet, norms = _f1_tables()
    rel.discard(("bot", "x"))
    return explicit_space("F2", F1_ELEMENTS, rel, meet, norms, unit="top", meet_space=True, commutative=True)


def fixture_f3() -> CoverSpace:
    """F1 with ``h(top)`` raised to log 7, violating [H1]."""
    rel, meet, norms = _f1_tables()
    norms["top"] = math.log(7)
    return explicit_space("F3", F1_ELEMENTS, rel, meet, norms, unit="top", meet_space=True, commutative=True)


def fixture_f4() -> tuple[CoverSpace, SelfMap]:
    """Three-element chain ``0 ≺ 1 ≺ 2`` with the cofinal morphism 2→1→0→0.

    The meet picks the finer element; 2 is the unit.  Every element is a
    positive generator and images reach the minimum.
    """
    elems = (0, 1, 2)
    rel = {(a, b) for a in elems for b in elems if a <= b}
    meet = {(a, b): min(a, b) for a in elems for b in elems}
    norms = {0: math.log(4), 1: math.log(2), 2: 0.0}
    space = explicit_space("F4", elems, rel, meet, norms, unit=2, meet_space=True, commutative=True)
    lam = explicit_map(space, {2: 1, 1: 0, 0: 0}, MapClass.MORPHISM, "λ4")
    return space, lam


@dataclass(frozen=True)
class RandomSpaceConfig:
    max_elements: int = 6
    ground: int = 4
    max_weight: int = 5


def random_set_family_space(rng: random.Random, config: RandomSpaceConfig = RandomSpaceConfig(), name: str = "R") -> CoverSpace:
    """A seeded random union-closed family with at most ``max_elements`` members."""
    ground = list(range(config.ground))
    while True:
        fam = {frozenset()}
        gens = rng.randint(1, config.ground)
        for _ in range(gens):
            s = frozenset(x for x in ground if rng.random() < 0.5)
            fam.add(s)
            fam = _union_close(fam)
        if len(fam) <= config.max_elements:
            break
    if rng.random() < 0.5 and len(fam) > 1:
        fam.discard(frozenset())
        if not fam:
            fam = {frozenset()}
    weights = {x: math.log(rng.randint(1, config.max_weight)) for x in ground}
    return set_family_space(name, fam, weights)


def _union_close(fam: set) -> set:
    fam = set(fam)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.product(list(fam), repeat=2):
            if a | b not in fam:
                fam.add(a | b)
                changed = True
    return fam
