"""Trajectory meets and finite-horizon entropy estimates."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .core import (
    CLASS_AXIOMS,
    Axiom,
    Budget,
    CoverSpace,
    MapClass,
    PreconditionError,
    SelfMap,
    axiom_closure,
    implies,
    iterate,
)
from .extreal import INF


def _power_apply(lam: SelfMap, cover, n: int):
    if n >= 0:
        return iterate(lam.apply, cover, n)
    if lam.inverse_apply is None:
        raise PreconditionError(f"negative index {n} needs an inverse of {lam.name}")
    return iterate(lam.inverse_apply, cover, -n)


def trajectory_meet(space: CoverSpace, lam: SelfMap, alpha, n: int, m: int):
    """``λⁿα ∧ λⁿ⁺¹α ∧ … ∧ λᵐα``, folded left in increasing index order."""
    if n > m:
        raise ValueError(f"empty index range [{n}, {m}]")
    space.check_member(alpha)
    cur = _power_apply(lam, alpha, n)
    acc = cur
    for _ in range(n + 1, m + 1):
        cur = lam.apply(cur)
        acc = space.meet(acc, cur)
    return acc


@dataclass
class EntropyEstimate:
    """Finite-horizon data for ``h(λ, α)``.

    ``a_seq[i]`` is the norm of the ``i``-th trajectory meet, whose number
    of factors is ``lengths[i]``; ``quotients[i] = a_seq[i] / lengths[i]``.
    ``exact`` is set only together with a ``reason``.
    """

    horizon: int
    lengths: list[int] = field(default_factory=list)
    a_seq: list[float] = field(default_factory=list)
    quotients: list[float] = field(default_factory=list)
    running_inf: list[float] = field(default_factory=list)
    exact: Optional[float] = None
    reason: Optional[str] = None
    valid_upper_bound: bool = False
    stabilized_at: Optional[int] = None
    covers: list = field(default_factory=list, repr=False)
    notes: list[str] = field(default_factory=list)

    @property
    def value(self) -> float:
        """The exact value when certified, otherwise the last running infimum."""
        if self.exact is not None:
            return self.exact
        return self.running_inf[-1]

    @property
    def label(self) -> str:
        if self.exact is not None:
            return "exact"
        return "upper-bound" if self.valid_upper_bound else "estimate"

    def _push(self, length: int, a: float, cover) -> None:
        q = INF if math.isinf(a) else a / length
        self.lengths.append(length)
        self.a_seq.append(a)
        self.quotients.append(q)
        prev = self.running_inf[-1] if self.running_inf else INF
        self.running_inf.append(min(prev, q))
        self.covers.append(cover)

    def as_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "a_seq": self.a_seq,
            "quotients": self.quotients,
            "running_inf": self.running_inf[-1] if self.running_inf else None,
            "exact": self.exact,
            "reason": self.reason,
            "label": self.label,
            "valid_upper_bound": self.valid_upper_bound,
            "stabilized_at": self.stabilized_at,
            "notes": list(self.notes),
        }


def bounded_norm_sup(space: CoverSpace) -> Optional[float]:
    """``sup h`` over an enumerable space, or ``None`` if not enumerable."""
    if space.elements is None:
        return None
    return max(space.norm(a) for a in space.elements)


def space_entropy(space: CoverSpace) -> float:
    """``h(C) = sup_α h(α)`` for a finite space."""
    v = bounded_norm_sup(space)
    if v is None:
        raise PreconditionError(f"space {space.name!r} is not enumerable")
    return v


def _finalize(est: EntropyEstimate, space: CoverSpace, lam: SelfMap, alpha) -> None:
    if lam.closed_form is not None:
        v = lam.closed_form(alpha)
        if v is not None:
            est.exact, est.reason = float(v), "closed-form"
            return
    if math.isinf(est.a_seq[0]):
        est.exact, est.reason = INF, "infinite-norm"
        return
    if est.stabilized_at is not None:
        est.exact, est.reason = 0.0, "stabilized"
        return
    sup = bounded_norm_sup(space)
    if sup is not None and not math.isinf(sup):
        est.exact, est.reason = 0.0, "bounded-norm-finite-space"


def entropy_relative(
    space: CoverSpace,
    lam: SelfMap,
    alpha,
    horizon: int,
    budget: Optional[int] = None,
) -> EntropyEstimate:
    """Estimate ``h(λ, α)`` from ``a_n = h(α₀ⁿ⁻¹)`` for ``n = 1..horizon``.

    On a meet space ``a_n`` is eventually constant, and the entropy is 0,
    once ``λ^{s+1}α ~ λ^sα``; for maps satisfying [U1] it is enough that the
    next factor ``λⁿα`` is refined by ``α₀ⁿ⁻¹``, since then every later
    factor is too.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    space.check_member(alpha)
    steps = Budget(budget, "entropy_relative")
    est = EntropyEstimate(horizon=horizon, valid_upper_bound=lam.is_lower)
    absorbs = Axiom.U1 in axiom_closure(CLASS_AXIOMS[lam.declared_class])
    cur = alpha
    acc = alpha
    for n in range(1, horizon + 1):
        steps.step()
        if n > 1:
            acc = space.meet(acc, cur)
        est._push(n, space.norm(acc), acc)
        nxt = lam.apply(cur)
        if est.stabilized_at is None and space.meet_space:
            if space.equivalent(nxt, cur) or (absorbs and space.refines(acc, nxt)):
                est.stabilized_at = n
        cur = nxt
    _finalize(est, space, lam, alpha)
    return est


def entropy_bilateral(
    space: CoverSpace,
    lam: SelfMap,
    alpha,
    horizon: int,
    budget: Optional[int] = None,
) -> EntropyEstimate:
    """Quotients ``h(α₋ₙⁿ) / (2n+1)`` for ``n = 0..horizon-1``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if lam.inverse_apply is None:
        raise PreconditionError(f"{lam.name} has no inverse")
    if lam.declared_class is not MapClass.ISOMORPHISM:
        raise PreconditionError(f"{lam.name} is not declared an isomorphism")
    space.check_member(alpha)
    steps = Budget(budget, "entropy_bilateral")
    est = EntropyEstimate(horizon=horizon, valid_upper_bound=lam.is_lower)
    for n in range(horizon):
        steps.step(2 * n + 1)
        c = trajectory_meet(space, lam, alpha, -n, n)
        est._push(2 * n + 1, space.norm(c), c)
    _finalize(est, space, lam, alpha)
    return est


@dataclass
class FamilyEntropy:
    """Supremum of relative entropies over a family of covers."""

    value: float
    label: str
    reason: Optional[str]
    members: list[EntropyEstimate]
    family: list = field(repr=False, default_factory=list)

    @property
    def exact(self) -> bool:
        return self.label == "exact"

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "label": self.label,
            "reason": self.reason,
            "members": [m.as_dict() for m in self.members],
        }


def entropy(
    space: CoverSpace,
    lam: SelfMap,
    family: Sequence | int,
    horizon: int,
    cofinal: bool = False,
    generator_system: bool = False,
    budget: Optional[int] = None,
) -> FamilyEntropy:
    """``sup_{α ∈ family} h(λ, α)`` with a provenance label.

    An integer ``family`` takes that many members of the space's cofinal
    family.  The supremum is labelled ``exact`` only if every member is
    exact and the family is cofinal, a full enumeration, or a certified
    generator system; with exact members over an arbitrary subfamily it is a
    ``lower-bound``; otherwise it is an ``estimate``.
    """
    if isinstance(family, int):
        if space.cofinal_family is None:
            raise PreconditionError(f"space {space.name!r} has no cofinal family")
        family = [space.cofinal_family(k) for k in range(family)]
    family = list(family)
    if not family:
        raise ValueError("family must be nonempty")
    if space.elements is not None and set(space.elements) <= set(family):
        cofinal = True
    members = [entropy_relative(space, lam, a, horizon, budget) for a in family]
    value = max(m.value for m in members)
    all_exact = all(m.exact is not None for m in members)
    if all_exact and generator_system:
        label, reason = "exact", "generator-system"
    elif all_exact and cofinal:
        label, reason = "exact", "cofinal-family"
    elif all_exact:
        label, reason = "lower-bound", "subfamily"
    else:
        label, reason = "estimate", None
    return FamilyEntropy(value, label, reason, members, family)


def derived_entropy_norm(
    space: CoverSpace,
    lam: SelfMap,
    horizon: int = 32,
    verify: bool = True,
) -> CoverSpace:
    """Re-norm ``space`` by ``α ↦ h(λ, α)`` (exact value or running infimum).

    Requires a commutative space and a morphism; on finite spaces the map's
    class is verified exhaustively first.
    """
    if not space.commutative:
        raise PreconditionError("derived norm needs a commutative space")
    if not implies(lam.declared_class, MapClass.MORPHISM):
        raise PreconditionError(f"{lam.name} is not declared a morphism")
    if verify and space.elements is not None:
        from .axioms import classify_map

        rep = classify_map(space, lam)
        if not rep.has(MapClass.MORPHISM):
            raise PreconditionError(f"{lam.name} fails morphism check: {rep.failures()}")

    @functools.lru_cache(maxsize=None)
    def norm(alpha: Any) -> float:
        return entropy_relative(space, lam, alpha, horizon).value

    return space.renormed(norm, f"{space.name}[h^{lam.name}]")
