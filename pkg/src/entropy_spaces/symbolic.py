"""Full shifts and subshifts of finite type with cylinder covers.

A cover is given by the finite set ``S`` of coordinates its cylinders fix,
stored as a tuple of disjoint, non-adjacent closed intervals; ``()`` is the
trivial cover ``{Σ}``.  ``S ≺ S'`` iff ``S' ⊆ S``, the meet is the union, and
``H(S)`` is the log of the number of admissible patterns on ``S``, counted
exactly with integer transfer-matrix products.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable

from .core import CoverSpace, MapClass, PreconditionError, SelfMap

TRIVIAL: tuple = ()


def window(lo: int, hi: int) -> tuple:
    """The cover by cylinders over the interval ``[lo, hi]``."""
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    return ((lo, hi),)


def normalize(intervals: Iterable[tuple]) -> tuple:
    """Merge overlapping or adjacent intervals into canonical form."""
    out: list[list[int]] = []
    for lo, hi in sorted(intervals):
        if lo > hi:
            raise ValueError(f"bad interval ({lo}, {hi})")
        if out and lo <= out[-1][1] + 1:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple((a, b) for a, b in out)


def from_coordinates(coords: Iterable[int]) -> tuple:
    return normalize((c, c) for c in coords)


def coordinates(s: tuple) -> list[int]:
    return [c for lo, hi in s for c in range(lo, hi + 1)]


def is_canonical(s) -> bool:
    if not isinstance(s, tuple):
        return False
    try:
        return normalize(s) == s
    except (TypeError, ValueError):
        return False


def contains_set(big: tuple, small: tuple) -> bool:
    """``small ⊆ big`` for canonical coordinate sets."""
    i = 0
    for lo, hi in small:
        while i < len(big) and big[i][1] < lo:
            i += 1
        if i == len(big) or not (big[i][0] <= lo and hi <= big[i][1]):
            return False
    return True


def translate(s: tuple, d: int) -> tuple:
    return tuple((lo + d, hi + d) for lo, hi in s)


# -- transition matrices ----------------------------------------------------


def _matmul(a: tuple, b: tuple) -> tuple:
    k = len(a)
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(k)) for i in range(k))


def _boolify(a: tuple) -> tuple:
    return tuple(tuple(1 if x else 0 for x in row) for row in a)


@dataclass(frozen=True)
class Sft:
    """Subshift of finite type on ``{0..k-1}`` with 0/1 transition matrix ``A``."""

    k: int
    A: tuple
    two_sided: bool = True
    name: str = "sft"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("alphabet size must be >= 1")
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        object.__setattr__(self, "A", A)
        if len(A) != self.k or any(len(r) != self.k for r in A):
            raise ValueError(f"transition matrix must be {self.k}×{self.k}")
        if any(x not in (0, 1) for r in A for x in r):
            raise ValueError("transition matrix must be 0/1")
        for i in range(self.k):
            if not any(A[i]):
                raise ValueError(f"symbol {i} has no successor")
            if not any(A[j][i] for j in range(self.k)):
                raise ValueError(f"symbol {i} has no predecessor")

    @property
    def is_full(self) -> bool:
        return all(all(r) for r in self.A)

    @property
    def sidedness(self) -> str:
        return "two_sided" if self.two_sided else "one_sided"


def full_shift(k: int, two_sided: bool = True) -> Sft:
    return Sft(k, tuple((1,) * k for _ in range(k)), two_sided, f"full{k}")


def golden_mean(two_sided: bool = True) -> Sft:
    return Sft(2, ((1, 1), (1, 0)), two_sided, "golden")


@functools.lru_cache(maxsize=None)
def _bridge(sft: Sft, gap: int) -> tuple:
    """0/1 matrix: can symbol ``a`` be followed ``gap+1`` steps later by ``b``."""
    m = sft.A
    for _ in range(gap):
        m = _boolify(_matmul(m, sft.A))
    return m


def _vecmat(v: list, m: tuple) -> list:
    k = len(v)
    return [sum(v[i] * m[i][j] for i in range(k) if v[i]) for j in range(k)]


@functools.lru_cache(maxsize=4096)
def pattern_count(sft: Sft, s: tuple) -> int:
    """Number of admissible patterns on the coordinate set ``s``.

    Every admissible finite path extends to a point of the shift (no symbol
    is dead), so a pattern is admissible iff each interval reads a path and
    consecutive intervals are bridged by a path across the gap.
    """
    if not s:
        return 1
    v = [1] * sft.k
    prev_hi = None
    for lo, hi in s:
        if prev_hi is not None:
            v = _vecmat(v, _bridge(sft, lo - prev_hi - 1))
        for _ in range(hi - lo):
            v = _vecmat(v, sft.A)
        prev_hi = hi
    return sum(v)


def count_words(sft: Sft, n: int) -> int:
    """Admissible words of length ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return pattern_count(sft, window(0, n - 1))


def perron_log(sft: Sft) -> float:
    """``log`` of the spectral radius of ``A`` (the entropy limit)."""
    import numpy as np

    return float(math.log(max(abs(np.linalg.eigvals(np.array(sft.A, dtype=float))))))


def disjoint_union(a: Sft, b: Sft) -> Sft:
    """Block-diagonal matrix on the alphabet ``k₁ + k₂``."""
    if a.two_sided != b.two_sided:
        raise ValueError("sidedness mismatch")
    k = a.k + b.k
    rows = [list(r) + [0] * b.k for r in a.A] + [[0] * a.k + list(r) for r in b.A]
    return Sft(k, tuple(map(tuple, rows)), a.two_sided, f"{a.name}⊔{b.name}")


def product_sft(a: Sft, b: Sft) -> Sft:
    """Kronecker product; symbol ``(i, j)`` is ``i·k₂ + j``."""
    if a.two_sided != b.two_sided:
        raise ValueError("sidedness mismatch")
    rows = []
    for i1, j1 in itertools.product(range(a.k), range(b.k)):
        rows.append(tuple(a.A[i1][i2] * b.A[j1][j2] for i2, j2 in itertools.product(range(a.k), range(b.k))))
    return Sft(a.k * b.k, tuple(rows), a.two_sided, f"{a.name}×{b.name}")


# -- the cover space and maps -----------------------------------------------


def sft_space(sft: Sft, norm: str = "H") -> CoverSpace:
    """Cylinder covers over finite coordinate sets of ``sft``."""
    if norm not in ("H", "D"):
        raise ValueError("norm must be 'H' or 'D'")
    one_sided = not sft.two_sided

    def contains(s):
        if not is_canonical(s):
            return False
        return not (one_sided and s and s[0][0] < 0)

    if norm == "H":
        h = lambda s: math.log(pattern_count(sft, s))  # noqa: E731
    else:
        h = lambda s: 0.0  # noqa: E731
    if sft.two_sided:
        cofinal = lambda k: window(-k, k)  # noqa: E731
    else:
        cofinal = lambda k: window(0, k)  # noqa: E731
    return CoverSpace(
        name=f"{sft.name}[{sft.sidedness},{norm}]",
        refines=lambda a, b: contains_set(a, b),
        meet=lambda a, b: normalize(a + b),
        norm=h,
        unit=TRIVIAL,
        cofinal_family=cofinal,
        meet_space=True,
        commutative=True,
        contains=contains,
    )


def _full_shift_closed_form(sft: Sft):
    if not sft.is_full:
        return None
    lk = math.log(sft.k)
    return lambda s: lk if s else 0.0


def shift_preimage_map(sft: Sft) -> SelfMap:
    """``σ⁻¹``: cylinders over ``S`` go to cylinders over ``S + 1``.

    Pattern counts are translation invariant, so this is a homomorphism;
    on two-sided shifts it is an isomorphism with inverse ``S ↦ S − 1``.
    """
    closed = _full_shift_closed_form(sft)
    if sft.two_sided:
        return SelfMap(
            apply=lambda s: translate(s, 1),
            declared_class=MapClass.ISOMORPHISM,
            name="σ⁻¹",
            inverse_apply=lambda s: translate(s, -1),
            closed_form=closed,
            unital=True,
        )
    return SelfMap(lambda s: translate(s, 1), MapClass.HOMOMORPHISM, "σ⁻¹", closed_form=closed, unital=True)


def shift_forward_map(sft: Sft) -> SelfMap:
    """Forward image on a one-sided full shift: ``S ↦ {s − 1 : s ∈ S, s ≥ 1}``."""
    if sft.two_sided or not sft.is_full:
        raise PreconditionError("forward image is implemented for one-sided full shifts only")

    def apply(s):
        return normalize((max(lo - 1, 0), hi - 1) for lo, hi in s if hi >= 1)

    return SelfMap(apply, MapClass.LOWER_MORPHISM, "σ", unital=True)


def windows_within(lo: int, hi: int, include_trivial: bool = True) -> list[tuple]:
    out = [TRIVIAL] if include_trivial else []
    out += [window(i, j) for i in range(lo, hi + 1) for j in range(i, hi + 1)]
    return out


def coordinate_sets_within(lo: int, hi: int) -> list[tuple]:
    """Every subset of ``[lo, hi]`` (closed under the meet)."""
    pts = list(range(lo, hi + 1))
    return [from_coordinates(c) for r in range(len(pts) + 1) for c in itertools.combinations(pts, r)]


def brute_force_count(sft: Sft, coords: Iterable[int]) -> int:
    """Oracle: distinct restrictions to ``coords`` of admissible words on
    the interval they span."""
    coords = sorted(set(coords))
    if not coords:
        return 1
    lo, hi = coords[0], coords[-1]
    seen = set()
    for w in itertools.product(range(sft.k), repeat=hi - lo + 1):
        if all(sft.A[w[t]][w[t + 1]] for t in range(len(w) - 1)):
            seen.add(tuple(w[c - lo] for c in coords))
    return len(seen)
