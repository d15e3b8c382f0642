"""Finite abelian groups: subgroup lattices and the algebraic entropy spaces.

Elements of ``Z_{d1} ⊕ … ⊕ Z_{dk}`` are integer tuples and a subgroup is the
frozenset of its elements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import CoverSpace, MapClass, PreconditionError, SelfMap
from .constructions import ShiftSystem, adjoin_unit, coproduct_space, shift_space_map

DEFAULT_ORDER_CAP = 4096


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class FinAbGroup:
    factors: tuple
    order_cap: int = field(default=DEFAULT_ORDER_CAP, compare=False)

    def __post_init__(self):
        f = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in f):
            raise GroupError("every factor must be >= 2")
        object.__setattr__(self, "factors", f)
        if self.order > self.order_cap:
            raise GroupError(f"group order {self.order} exceeds the cap {self.order_cap}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def zero(self) -> tuple:
        return (0,) * self.rank

    def elements(self) -> list[tuple]:
        return list(itertools.product(*(range(d) for d in self.factors)))

    def add(self, x: tuple, y: tuple) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x: tuple) -> tuple:
        return tuple(-a % d for a, d in zip(x, self.factors))

    def reduce(self, x: Iterable[int]) -> tuple:
        return tuple(int(a) % d for a, d in zip(x, self.factors))

    @property
    def whole(self) -> frozenset:
        return frozenset(self.elements())

    @property
    def trivial(self) -> frozenset:
        return frozenset({self.zero})

    def __repr__(self) -> str:
        return "⊕".join(f"Z{d}" for d in self.factors) or "0"


def cyclic(n: int) -> FinAbGroup:
    return FinAbGroup((n,))


def generated(G: FinAbGroup, gens: Iterable[tuple]) -> frozenset:
    """Subgroup generated by ``gens`` (closure under addition suffices)."""
    gens = [G.reduce(g) for g in gens]
    seen = {G.zero}
    frontier = [G.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def subgroup_sum(G: FinAbGroup, E: frozenset, F: frozenset) -> frozenset:
    return frozenset(G.add(e, f) for e in E for f in F)


def is_subgroup(G: FinAbGroup, S: Iterable[tuple]) -> bool:
    S = set(S)
    return G.zero in S and all(G.add(x, y) in S for x in S for y in S)


def enumerate_subgroups(G: FinAbGroup) -> list[frozenset]:
    """All subgroups, by closing ``H + ⟨g⟩`` from the trivial group."""
    elems = G.elements()
    found = {G.trivial}
    frontier = [G.trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for g in elems:
                if g in H:
                    continue
                K = subgroup_sum(G, H, generated(G, [g]))
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def brute_force_subgroups(G: FinAbGroup) -> list[frozenset]:
    """Oracle: every subset containing 0 that is closed under addition."""
    elems = [x for x in G.elements() if x != G.zero]
    out = []
    for r in range(len(elems) + 1):
        for sub in itertools.combinations(elems, r):
            S = frozenset(sub) | {G.zero}
            if is_subgroup(G, S):
                out.append(S)
    return out


@dataclass(frozen=True)
class Endomorphism:
    """``x ↦ Mx`` with row ``i`` reduced mod ``dᵢ``."""

    G: FinAbGroup
    M: tuple

    def __post_init__(self):
        M = tuple(tuple(int(a) for a in row) for row in self.M)
        object.__setattr__(self, "M", M)
        k, d = self.G.rank, self.G.factors
        if len(M) != k or any(len(r) != k for r in M):
            raise GroupError(f"matrix must be {k}×{k}")
        for i in range(k):
            for j in range(k):
                if d[j] * M[i][j] % d[i]:
                    raise GroupError(f"entry ({i},{j}) is not compatible with Z{d[j]} → Z{d[i]}")

    def __call__(self, x: tuple) -> tuple:
        return self.G.reduce(sum(m * a for m, a in zip(row, x)) for row in self.M)

    def image(self, F: Iterable[tuple]) -> frozenset:
        return frozenset(self(x) for x in F)

    def preimage(self, F: frozenset) -> frozenset:
        return frozenset(x for x in self.G.elements() if self(x) in F)

    @property
    def injective(self) -> bool:
        return len(self.image(self.G.elements())) == self.G.order

    surjective = injective  # finite group: the two coincide

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        k = self.G.rank
        M = tuple(tuple(sum(self.M[i][t] * other.M[t][j] for t in range(k)) for j in range(k)) for i in range(k))
        return Endomorphism(self.G, M)


def identity_endo(G: FinAbGroup) -> Endomorphism:
    return Endomorphism(G, tuple(tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)))


def scalar_endo(G: FinAbGroup, c: int) -> Endomorphism:
    return Endomorphism(G, tuple(tuple(c if i == j else 0 for j in range(G.rank)) for i in range(G.rank)))


def weiss_space(G: FinAbGroup) -> CoverSpace:
    """Subgroups with ``E ≺ F`` iff ``F ⊆ E``, meet ``E + F``, norm ``log|F|``."""
    subs = tuple(enumerate_subgroups(G))
    members = frozenset(subs)
    return CoverSpace(
        name=f"weiss({G!r})",
        refines=lambda E, F: F <= E,
        meet=lambda E, F: subgroup_sum(G, E, F),
        norm=lambda F: math.log(len(F)),
        unit=G.trivial,
        elements=subs,
        meet_space=True,
        commutative=True,
        contains=lambda F: F in members,
    )


def weiss_map(phi: Endomorphism) -> SelfMap:
    images = {}

    def apply(F):
        if F not in images:
            images[F] = phi.image(F)
        return images[F]

    return SelfMap(apply, MapClass.LOWER_MORPHISM, "λφ", unital=True)


def adjoint_space(G: FinAbGroup) -> CoverSpace:
    """Subgroups with ``E ≺ F`` iff ``E ⊆ F``, meet ``∩``, norm ``log[G:F]``."""
    subs = tuple(enumerate_subgroups(G))
    members = frozenset(subs)
    n = G.order
    return CoverSpace(
        name=f"adjoint({G!r})",
        refines=lambda E, F: E <= F,
        meet=lambda E, F: E & F,
        norm=lambda F: math.log(n // len(F)),
        unit=G.whole,
        elements=subs,
        meet_space=True,
        commutative=True,
        contains=lambda F: F in members,
    )


def adjoint_map(phi: Endomorphism) -> SelfMap:
    return SelfMap(phi.preimage, MapClass.LOWER_MORPHISM, "φ⁻¹", unital=True)


def backward_weiss_map(phi: Endomorphism) -> SelfMap:
    """Preimage on the Weiss space; declared only a lower map.

    On a finite group an injective ``φ`` is bijective, so the classifier
    will find more; nothing beyond the lower-map axioms is assumed.
    """
    if not phi.injective:
        raise PreconditionError("backward Weiss map needs an injective endomorphism")
    return SelfMap(phi.preimage, MapClass.LOWER_MAP, "φ⁻¹", unital=True)


@dataclass(frozen=True)
class BernoulliShift:
    group: FinAbGroup
    system: ShiftSystem
    generator: object  # ᾱ with α = H at index 0

    @property
    def space(self) -> CoverSpace:
        return self.system.space

    @property
    def shift(self) -> SelfMap:
        return self.system.shift

    def targets(self, support: Sequence[int]) -> list:
        """Every tuple supported in ``support`` with entries among all subgroups."""
        return list(coproduct_space(self.system.base, "N", support).elements)


def bernoulli_weiss_shift(H: FinAbGroup) -> BernoulliShift:
    """The right shift on ``H^{⊕ℕ}`` seen through Weiss covers."""
    base = adjoin_unit(weiss_space(H))
    system = shift_space_map(base, "N")
    return BernoulliShift(H, system, system.embed(H.whole))


def expansivity_sum(G: FinAbGroup, phi: Endomorphism, F: frozenset, m: int) -> frozenset:
    """``F + φF + … + φᵐF``."""
    total, cur = F, F
    for _ in range(m):
        cur = phi.image(cur)
        total = subgroup_sum(G, total, cur)
    return total


def algebraic_generator_depth(G: FinAbGroup, phi: Endomorphism, F: frozenset, limit: Optional[int] = None) -> Optional[int]:
    """Least ``m`` with ``Σ_{k≤m} φᵏF = G``, or ``None`` if the sums stall."""
    limit = G.order if limit is None else limit
    prev = None
    for m in range(limit + 1):
        s = expansivity_sum(G, phi, F, m)
        if s == G.whole:
            return m
        if s == prev:
            return None
        prev = s
    return None
