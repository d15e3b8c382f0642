"""Finite topological spaces with their open-cover entropy spaces.

Points are ``0..n-1`` and sets are bitmasks.  A cover is stored as the
frozenset of its maximal members, which is the canonical representative of
its ``~``-class; :func:`cover_ord` is the one quantity that depends on the
family itself and therefore accepts arbitrary families.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import Budget, CoverSpace, MapClass, PreconditionError, SelfMap, SpaceMap
from .constructions import f_product_map, f_product_space
from .connections import Connection

DEFAULT_SEARCH_BUDGET = 200_000


def bits(s: Iterable[int]) -> int:
    m = 0
    for p in s:
        m |= 1 << p
    return m


def points(mask: int) -> list[int]:
    out, p = [], 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


def fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, points(mask))) + "}"


@dataclass(frozen=True)
class TopologyCheck:
    valid: bool
    witness: Optional[tuple] = None
    reason: str = ""


def validate_topology(n: int, opens: Iterable[int]) -> TopologyCheck:
    """Contains ∅ and X and is closed under pairwise unions and intersections."""
    full = (1 << n) - 1
    fam = set(opens)
    for o in fam:
        if o < 0 or o > full:
            return TopologyCheck(False, (o,), "set outside the point range")
    if 0 not in fam:
        return TopologyCheck(False, (0,), "missing empty set")
    if full not in fam:
        return TopologyCheck(False, (full,), "missing whole space")
    for a, b in itertools.combinations(sorted(fam), 2):
        if a | b not in fam:
            return TopologyCheck(False, (a, b), "not closed under union")
        if a & b not in fam:
            return TopologyCheck(False, (a, b), "not closed under intersection")
    return TopologyCheck(True)


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    opens: frozenset

    def __post_init__(self):
        chk = validate_topology(self.n, self.opens)
        if not chk.valid:
            raise ValueError(f"invalid topology: {chk.reason} {chk.witness}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def nonempty_opens(self) -> list[int]:
        return sorted(o for o in self.opens if o)

    def is_open(self, mask: int) -> bool:
        return mask in self.opens


def discrete(n: int) -> FiniteTopology:
    return FiniteTopology(n, frozenset(range(1 << n)))


def indiscrete(n: int) -> FiniteTopology:
    return FiniteTopology(n, frozenset({0, (1 << n) - 1}))


def sierpinski() -> FiniteTopology:
    return FiniteTopology(2, frozenset({0, 0b01, 0b11}))


def from_sets(n: int, opens: Iterable[Iterable[int]]) -> FiniteTopology:
    return FiniteTopology(n, frozenset(bits(o) for o in opens))


def all_topologies(n: int) -> list[FiniteTopology]:
    """Every topology on ``n`` labelled points, by brute force over families."""
    full = (1 << n) - 1
    middle = list(range(1, full))
    out = []
    for r in range(len(middle) + 1):
        for fam in itertools.combinations(middle, r):
            opens = set(fam) | {0, full}
            if validate_topology(n, opens).valid:
                out.append(FiniteTopology(n, frozenset(opens)))
    return out


# -- covers -----------------------------------------------------------------


def canonical(family: Iterable[int]) -> frozenset:
    """Maximal nonempty members of a family."""
    fam = set(m for m in family if m)
    return frozenset(a for a in fam if not any(a != b and a & b == a for b in fam))


def is_cover(top: FiniteTopology, family: Iterable[int]) -> bool:
    fam = list(family)
    union = 0
    for m in fam:
        if not top.is_open(m):
            return False
        union |= m
    return union == top.full


def antichain_covers(top: FiniteTopology) -> list[frozenset]:
    """All open covers up to ``~``, as antichains of nonempty open sets."""
    opens = top.nonempty_opens
    out = []

    def rec(i, chosen, union):
        if i == len(opens):
            if union == top.full:
                out.append(frozenset(chosen))
            return
        o = opens[i]
        rec(i + 1, chosen, union)
        if all(o & c != o and o & c != c for c in chosen):
            chosen.append(o)
            rec(i + 1, chosen, union | o)
            chosen.pop()

    rec(0, [], 0)
    return sorted(out, key=lambda c: (len(c), sorted(c)))


def is_irredundant(top: FiniteTopology, cover: Iterable[int]) -> bool:
    fam = list(cover)
    for i in range(len(fam)):
        rest = 0
        for j, m in enumerate(fam):
            if j != i:
                rest |= m
        if rest == top.full:
            return False
    return True


def irredundant_covers(top: FiniteTopology) -> list[frozenset]:
    """Covers none of whose members can be dropped."""
    return [c for c in antichain_covers(top) if is_irredundant(top, c)]


def refines(alpha: Iterable[int], beta: Iterable[int]) -> bool:
    """Every member of ``alpha`` lies inside some member of ``beta``."""
    beta = list(beta)
    return all(any(a & b == a for b in beta) for a in alpha)


def cover_meet(alpha: Iterable[int], beta: Iterable[int]) -> frozenset:
    return canonical(a & b for a in alpha for b in beta)


# -- norms ------------------------------------------------------------------


def _greedy(members: list[int], full: int) -> int:
    covered, count = 0, 0
    while covered != full:
        best = max(members, key=lambda m: bin(m & ~covered).count("1"))
        covered |= best
        count += 1
    return count


def cover_N(top: FiniteTopology, alpha: Iterable[int], budget: Optional[int] = DEFAULT_SEARCH_BUDGET) -> int:
    """Exact minimum subcover size by branch and bound on the lowest
    uncovered point, seeded with the greedy bound."""
    members = sorted(canonical(alpha))
    full = top.full
    if full == 0:
        return 0
    union = 0
    for m in members:
        union |= m
    if union != full:
        raise PreconditionError("family does not cover the space")
    best = _greedy(members, full)
    steps = Budget(budget, "cover_N")
    by_point = [[m for m in members if m >> p & 1] for p in range(top.n)]

    def rec(covered: int, count: int) -> None:
        nonlocal best
        steps.step()
        if covered == full:
            best = min(best, count)
            return
        if count + 1 >= best:
            return
        low = (~covered & full) & -(~covered & full)
        p = low.bit_length() - 1
        for m in by_point[p]:
            rec(covered | m, count + 1)

    rec(0, 0)
    return best


def brute_force_N(top: FiniteTopology, alpha: Iterable[int]) -> int:
    """Oracle: smallest subfamily (by size) whose union is the space."""
    fam = sorted(set(m for m in alpha if m))
    if top.full == 0:
        return 0
    for r in range(1, len(fam) + 1):
        for sub in itertools.combinations(fam, r):
            u = 0
            for m in sub:
                u |= m
            if u == top.full:
                return r
    raise PreconditionError("family does not cover the space")


def cover_H(top: FiniteTopology, alpha: Iterable[int], budget: Optional[int] = DEFAULT_SEARCH_BUDGET) -> float:
    return math.log(cover_N(top, alpha, budget))


def cover_ord(alpha: Iterable[int]) -> int:
    """Largest point multiplicity minus one (duplicates collapsed)."""
    fam = set(m for m in alpha if m)
    if not fam:
        return -1
    width = max(fam).bit_length()
    return max(sum(1 for m in fam if m >> p & 1) for p in range(width)) - 1


def brute_force_ord(alpha: Iterable[int]) -> int:
    """Oracle: largest subfamily with nonempty intersection, minus one."""
    fam = sorted(set(m for m in alpha if m))
    best = 0
    for r in range(1, len(fam) + 1):
        for sub in itertools.combinations(fam, r):
            inter = sub[0]
            for m in sub[1:]:
                inter &= m
            if inter:
                best = max(best, r)
    return best - 1


def cover_D(top: FiniteTopology, alpha: Iterable[int], budget: Optional[int] = DEFAULT_SEARCH_BUDGET) -> int:
    """Minimum ``ord(β)`` over open covers ``β ≺ α``.

    Candidates are the nonempty opens inside some member of ``α``; the
    search branches on the lowest uncovered point and prunes on the current
    maximum multiplicity.
    """
    alpha = list(canonical(alpha))
    full = top.full
    if full == 0:
        return -1
    cands = [o for o in top.nonempty_opens if any(o & a == o for a in alpha)]
    by_point = [[o for o in cands if o >> p & 1] for p in range(top.n)]
    if any(not c for c in by_point):
        raise PreconditionError("family does not cover the space")
    steps = Budget(budget, "cover_D")
    best = cover_ord(alpha)
    mult = [0] * top.n

    def rec(covered: int, worst: int) -> None:
        nonlocal best
        steps.step()
        if worst >= best + 1:
            return
        if covered == full:
            best = min(best, worst - 1)
            return
        low = (~covered & full) & -(~covered & full)
        p = low.bit_length() - 1
        for o in by_point[p]:
            pts = points(o)
            for q in pts:
                mult[q] += 1
            rec(covered | o, max(worst, max(mult[q] for q in pts)))
            for q in pts:
                mult[q] -= 1

    rec(0, 0)
    return best


def brute_force_D(top: FiniteTopology, alpha: Iterable[int]) -> int:
    """Oracle: min ord over every family of opens refining ``alpha``."""
    alpha = list(canonical(alpha))
    cands = [o for o in top.nonempty_opens if any(o & a == o for a in alpha)]
    best = None
    for r in range(1, len(cands) + 1):
        for sub in itertools.combinations(cands, r):
            u = 0
            for m in sub:
                u |= m
            if u == top.full:
                o = cover_ord(sub)
                best = o if best is None else min(best, o)
    return best


def covering_dimension(top: FiniteTopology, budget: Optional[int] = DEFAULT_SEARCH_BUDGET) -> int:
    return max(cover_D(top, c, budget) for c in antichain_covers(top))


# -- maps -------------------------------------------------------------------


def _image(t: tuple, mask: int) -> int:
    out = 0
    for p in points(mask):
        out |= 1 << t[p]
    return out


def _preimage(t: tuple, mask: int) -> int:
    out = 0
    for p, q in enumerate(t):
        if mask >> q & 1:
            out |= 1 << p
    return out


@dataclass(frozen=True)
class ContinuousSelfMap:
    """A point map ``t`` with its continuity, openness and onto flags."""

    top: FiniteTopology
    t: tuple
    continuous: bool = field(init=False)
    open: bool = field(init=False)
    onto: bool = field(init=False)
    witnesses: dict = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        t = tuple(self.t)
        object.__setattr__(self, "t", t)
        if len(t) != self.top.n or any(not 0 <= q < self.top.n for q in t):
            raise ValueError("point map must send 0..n-1 into 0..n-1")
        wit = {}
        cont = opn = True
        for o in self.top.nonempty_opens:
            if cont and not self.top.is_open(_preimage(t, o)):
                cont, wit["continuous"] = False, o
            if opn and not self.top.is_open(_image(t, o)):
                opn, wit["open"] = False, o
        onto = set(t) == set(range(self.top.n))
        if not onto:
            wit["onto"] = min(set(range(self.top.n)) - set(t))
        object.__setattr__(self, "continuous", cont)
        object.__setattr__(self, "open", opn)
        object.__setattr__(self, "onto", onto)
        object.__setattr__(self, "witnesses", wit)

    @property
    def homeomorphism(self) -> bool:
        return self.continuous and self.open and self.onto

    def inverse_points(self) -> tuple:
        inv = [0] * len(self.t)
        for p, q in enumerate(self.t):
            inv[q] = p
        return tuple(inv)


def validate_map(top: FiniteTopology, t) -> dict:
    m = ContinuousSelfMap(top, tuple(t))
    return {"continuous": m.continuous, "open": m.open, "onto": m.onto, "witnesses": dict(m.witnesses)}


def topo_entropy_space(top: FiniteTopology, norm: str = "H", budget: Optional[int] = DEFAULT_SEARCH_BUDGET) -> CoverSpace:
    """Open covers of ``top`` with refinement, intersection meet and H or D."""
    if norm not in ("H", "D"):
        raise ValueError("norm must be 'H' or 'D'")
    elems = tuple(antichain_covers(top))
    members = frozenset(elems)

    @functools.lru_cache(maxsize=None)
    def h(c):
        if norm == "H":
            return math.log(cover_N(top, c, budget))
        return float(cover_D(top, c, budget))

    return CoverSpace(
        name=f"top{top.n}[{norm}]",
        refines=refines,
        meet=cover_meet,
        norm=h,
        unit=frozenset({top.full}),
        elements=elems,
        meet_space=True,
        commutative=True,
        contains=lambda c: c in members,
    )


def preimage_map(T: ContinuousSelfMap) -> SelfMap:
    """``α ↦ T⁻¹α``; an isomorphism when ``T`` is a homeomorphism."""
    if not T.continuous:
        raise PreconditionError(f"map is not continuous: preimage of {fmt_set(T.witnesses['continuous'])} is not open")
    t = T.t
    apply = lambda c: canonical(_preimage(t, o) for o in c)  # noqa: E731
    if T.homeomorphism:
        ti = T.inverse_points()
        inv = lambda c: canonical(_preimage(ti, o) for o in c)  # noqa: E731
        return SelfMap(apply, MapClass.ISOMORPHISM, "T⁻¹", inverse_apply=inv, unital=True)
    return SelfMap(apply, MapClass.LOWER_MORPHISM, "T⁻¹", unital=True)


def forward_map(T: ContinuousSelfMap) -> SelfMap:
    """``α ↦ Tα`` for an open onto map."""
    if not (T.open and T.onto):
        raise PreconditionError("forward image needs an open onto map")
    t = T.t
    return SelfMap(lambda c: canonical(_image(t, o) for o in c), MapClass.LOWER_MAP, "T", unital=True)


# -- subspaces and the comparison connections -----------------------------


@dataclass(frozen=True)
class Subspace:
    parent: FiniteTopology
    mask: int
    top: FiniteTopology
    index: tuple  # parent point of each subspace point

    def to_local(self, m: int) -> int:
        return bits(i for i, p in enumerate(self.index) if m >> p & 1)

    def to_parent(self, m: int) -> int:
        return bits(self.index[i] for i in points(m))


def subspace(top: FiniteTopology, mask: int) -> Subspace:
    """Relative topology on the points of ``mask``."""
    idx = tuple(points(mask))
    local = frozenset(bits(i for i, p in enumerate(idx) if o >> p & 1) for o in top.opens)
    return Subspace(top, mask, FiniteTopology(len(idx), local), idx)


def restrict_cover(sub: Subspace, alpha: Iterable[int]) -> frozenset:
    """``α ∧ Y`` as a cover of the subspace."""
    return canonical(sub.to_local(o & sub.mask) for o in alpha)


def is_extension_closed(sub: Subspace) -> tuple[bool, Optional[frozenset]]:
    """Every open cover of the subspace is a trace ``α ∧ Y``; witness otherwise."""
    top = sub.parent
    for gamma in antichain_covers(sub.top):
        traces = [sub.to_parent(u) for u in gamma]
        fam = [o for o in top.nonempty_opens if any(o & sub.mask & g == o & sub.mask for g in traces)]
        union = 0
        for o in fam:
            union |= o
        if union != top.full or restrict_cover(sub, fam) != gamma:
            return False, gamma
    return True, None


def restricted_map(sub: Subspace, T: ContinuousSelfMap) -> ContinuousSelfMap:
    if _image(T.t, sub.mask) & ~sub.mask:
        raise PreconditionError("subspace is not invariant")
    pos = {p: i for i, p in enumerate(sub.index)}
    return ContinuousSelfMap(sub.top, tuple(pos[T.t[p]] for p in sub.index))


def restriction_connection(sub: Subspace, T: ContinuousSelfMap) -> Connection:
    """``μ(α) = α ∧ Y`` from ``λ_T`` to ``λ_{T|Y}``."""
    src = topo_entropy_space(sub.parent)
    tgt = topo_entropy_space(sub.top)
    mu = SpaceMap(src, tgt, lambda c: restrict_cover(sub, c), "∧Y", declared_class=MapClass.LOWER_MORPHISM)
    return Connection(mu, preimage_map(T), preimage_map(restricted_map(sub, T)))


def union_connection(sub1: Subspace, sub2: Subspace, T: ContinuousSelfMap) -> Connection:
    """``α ↦ (α ∧ X₁, α ∧ X₂)`` into the log-sum-exp product of the pieces."""
    if sub1.mask | sub2.mask != sub1.parent.full:
        raise PreconditionError("subspaces do not cover the space")
    src = topo_entropy_space(sub1.parent)
    tgt = f_product_space(topo_entropy_space(sub1.top), topo_entropy_space(sub2.top))
    mu = SpaceMap(src, tgt, lambda c: (restrict_cover(sub1, c), restrict_cover(sub2, c)), "∧(X₁,X₂)")
    lam2 = f_product_map(preimage_map(restricted_map(sub1, T)), preimage_map(restricted_map(sub2, T)))
    return Connection(mu, preimage_map(T), lam2)


def quotient_connection(
    X: FiniteTopology,
    Y: FiniteTopology,
    pi: tuple,
    T: ContinuousSelfMap,
    S: ContinuousSelfMap,
) -> Connection:
    """``μ(α) = π⁻¹α`` from ``λ_S`` on ``Y`` to ``λ_T`` on ``X``."""
    P = _Points(X, Y, tuple(pi))
    if not P.continuous or not P.onto:
        raise PreconditionError("π must be continuous and onto")
    if any(pi[T.t[p]] != S.t[pi[p]] for p in range(X.n)):
        raise PreconditionError("π T ≠ S π")
    src, tgt = topo_entropy_space(Y), topo_entropy_space(X)
    mu = SpaceMap(src, tgt, lambda c: canonical(_preimage(P.pi, o) for o in c), "π⁻¹", declared_class=MapClass.HOMOMORPHISM)
    return Connection(mu, preimage_map(S), preimage_map(T))


@dataclass(frozen=True)
class _Points:
    X: FiniteTopology
    Y: FiniteTopology
    pi: tuple

    @property
    def continuous(self) -> bool:
        return all(self.X.is_open(_preimage(self.pi, o)) for o in self.Y.opens)

    @property
    def onto(self) -> bool:
        return set(self.pi) == set(range(self.Y.n))

