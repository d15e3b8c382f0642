"""Generators, generator systems and cofinal descent."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .core import Budget, CoverSpace, MapClass, PreconditionError, SelfMap, implies
from .entropy import FamilyEntropy, entropy, entropy_relative, trajectory_meet

DEFAULT_M_BUDGET = 64


@dataclass
class GeneratorCertificate:
    """Per-target witnesses ``(β, α, m)`` with ``α₀ᵐ ≺ β`` (or ``α₋ₘᵐ ≺ β``)."""

    system: list
    kind: str  # "positive" or "two_sided"
    witnesses: list[tuple]
    scope: str  # "exhaustive" or "family-based"
    space: CoverSpace = field(repr=False)
    map: SelfMap = field(repr=False)

    @property
    def alpha(self):
        return self.system[0] if len(self.system) == 1 else self.system

    def verify(self) -> bool:
        lo = (lambda m: 0) if self.kind == "positive" else (lambda m: -m)
        for beta, alpha, m in self.witnesses:
            if not self.space.refines(trajectory_meet(self.space, self.map, alpha, lo(m), m), beta):
                return False
        return True

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "scope": self.scope,
            "targets": len(self.witnesses),
            "max_m": max((m for _, _, m in self.witnesses), default=0),
        }


@dataclass(frozen=True)
class Refusal:
    """No witness ``m ≤ m_budget`` was found for ``beta``.

    This is inconclusive: a larger budget might succeed.
    """

    beta: Any
    m_budget: int
    reason: str = "budget-bounded"

    def as_dict(self) -> dict:
        return {"refused": repr(self.beta), "m_budget": self.m_budget, "reason": self.reason}


class _Trajectory:
    """Lazily computed ``α₀ᵐ`` (or ``α₋ₘᵐ``) for ``m = 0, 1, ...``."""

    def __init__(self, space: CoverSpace, lam: SelfMap, alpha, two_sided: bool):
        self.space, self.lam, self.alpha, self.two_sided = space, lam, alpha, two_sided
        self.meets = [alpha]
        self._cur = alpha

    def __getitem__(self, m: int):
        while len(self.meets) <= m:
            k = len(self.meets)
            if self.two_sided:
                self.meets.append(trajectory_meet(self.space, self.lam, self.alpha, -k, k))
            else:
                self._cur = self.lam.apply(self._cur)
                self.meets.append(self.space.meet(self.meets[-1], self._cur))
        return self.meets[m]


def _search(
    space: CoverSpace,
    lam: SelfMap,
    system: Sequence,
    targets: Optional[Sequence],
    m_budget: int,
    two_sided: bool,
    budget: Optional[int],
):
    if m_budget < 0:
        raise ValueError("m_budget must be >= 0")
    if two_sided and lam.inverse_apply is None:
        raise PreconditionError(f"{lam.name} has no inverse")
    system = list(system)
    if not system:
        raise ValueError("empty generator system")
    space.check_member(*system)
    if targets is None:
        if space.elements is None:
            raise PreconditionError("infinite space: pass an explicit target family")
        targets, scope = list(space.elements), "exhaustive"
    else:
        targets = list(targets)
        scope = "family-based"
        if space.elements is not None and set(space.elements) <= set(targets):
            scope = "exhaustive"
    steps = Budget(budget, "generator search")
    trajs = [_Trajectory(space, lam, a, two_sided) for a in system]
    witnesses = []
    for beta in targets:
        found = None
        for m in range(m_budget + 1):
            for t in trajs:
                steps.step()
                if space.refines(t[m], beta):
                    found = (beta, t.alpha, m)
                    break
            if found:
                break
        if found is None:
            return Refusal(beta, m_budget)
        witnesses.append(found)
    kind = "two_sided" if two_sided else "positive"
    return GeneratorCertificate(system, kind, witnesses, scope, space, lam)


def is_positive_generator(space, lam, alpha, targets=None, m_budget=DEFAULT_M_BUDGET, budget=None):
    """Certificate that every target is refined by some ``α₀ᵐ``, or a refusal."""
    return _search(space, lam, [alpha], targets, m_budget, False, budget)


def is_generator(space, lam, alpha, targets=None, m_budget=DEFAULT_M_BUDGET, budget=None):
    """As :func:`is_positive_generator` with the two-sided meets ``α₋ₘᵐ``."""
    return _search(space, lam, [alpha], targets, m_budget, True, budget)


def is_generator_system(space, lam, system, targets=None, m_budget=DEFAULT_M_BUDGET, two_sided=False, budget=None):
    return _search(space, lam, system, targets, m_budget, two_sided, budget)


def generator_system_entropy(
    space: CoverSpace,
    lam: SelfMap,
    certificate: GeneratorCertificate,
    horizon: int,
) -> FamilyEntropy:
    """``sup_{α∈system} h(λ, α)``, which equals ``h(λ)`` for morphisms on
    meet spaces (isomorphisms in the two-sided case).

    The result is labelled exact when every member value is exact.  A
    family-based certificate keeps the label but says so in ``reason``: the
    equality with ``h(λ)`` then holds relative to the certified targets.
    """
    if not isinstance(certificate, GeneratorCertificate):
        raise PreconditionError("missing generator certificate")
    if certificate.space is not space or certificate.map is not lam:
        raise PreconditionError("certificate was issued for a different system")
    if not certificate.verify():
        raise PreconditionError("generator certificate does not re-verify")
    if not space.meet_space:
        raise PreconditionError("generator entropy needs a meet space")
    need = MapClass.ISOMORPHISM if certificate.kind == "two_sided" else MapClass.MORPHISM
    if not implies(lam.declared_class, need):
        raise PreconditionError(f"{lam.name} is not declared a {need.value}")
    res = entropy(space, lam, certificate.system, horizon, generator_system=True)
    if res.label == "exact" and certificate.scope != "exhaustive":
        res.reason = "generator-system (family-scoped certificate)"
    return res


@dataclass
class DescentCertificate:
    """``β`` with ``λⁿβ ≻ λⁿ⁺¹β`` for ``n < checked_depth`` whose orbit refines
    every enumerated target."""

    beta: Any
    m: int
    gamma: Any
    checked_depth: int
    refinement_targets: list[tuple]

    def as_dict(self) -> dict:
        return {
            "beta": repr(self.beta),
            "m": self.m,
            "gamma": repr(self.gamma),
            "checked_depth": self.checked_depth,
            "targets": [(repr(g), n) for g, n in self.refinement_targets],
        }


def cofinal_descent(
    space: CoverSpace,
    lam: SelfMap,
    certificate: GeneratorCertificate,
    depth: int = 16,
) -> DescentCertificate:
    """Build ``β = α ∧ λα ∧ … ∧ λ^{m−1}α`` from a cofinality witness.

    ``γ`` is the first element (in enumeration order) with ``λγ ≺ α``; ``m ≥ 1``
    is the first index with ``α₀^{m−1} ≺ γ``.  Needs a finite meet space, a
    morphism with cofinal image and an exhaustive positive-generator
    certificate.
    """
    if space.elements is None:
        raise PreconditionError("cofinal descent needs an enumerable space")
    if not space.meet_space:
        raise PreconditionError("cofinal descent needs a meet space")
    if not implies(lam.declared_class, MapClass.MORPHISM):
        raise PreconditionError(f"{lam.name} is not declared a morphism")
    if certificate.kind != "positive" or certificate.scope != "exhaustive" or len(certificate.system) != 1:
        raise PreconditionError("need an exhaustive certificate for a single positive generator")
    alpha = certificate.system[0]
    elems = list(space.elements)
    images = [lam.apply(a) for a in elems]
    for b in elems:
        if not any(space.refines(x, b) for x in images):
            raise PreconditionError(f"{lam.name} is not cofinal: nothing maps below {b!r}")
    gamma = next(g for g, x in zip(elems, images) if space.refines(x, alpha))
    traj = _Trajectory(space, lam, alpha, False)
    m = None
    for k in range(1, len(elems) + 2):
        if space.refines(traj[k - 1], gamma):
            m = k
            break
    if m is None:
        raise PreconditionError("generator certificate inconsistent with cofinality witness")
    beta = traj[m - 1]

    orbit = [beta]
    for _ in range(depth):
        orbit.append(lam.apply(orbit[-1]))
    for n in range(depth):
        if not space.refines(orbit[n + 1], orbit[n]):
            raise PreconditionError(f"descent fails at n={n}: λⁿ⁺¹β does not refine λⁿβ")
    targets = []
    for g in elems:
        n = next((i for i, b in enumerate(orbit) if space.refines(b, g)), None)
        if n is None:
            raise PreconditionError(f"orbit of β does not refine {g!r} within depth {depth}")
        targets.append((g, n))
    return DescentCertificate(beta, m, gamma, depth, targets)


def descent_entropy(space: CoverSpace, lam: SelfMap, cert: DescentCertificate, horizon: int = 32):
    """Relative entropy at ``β``; the descent forces it to be 0."""
    return entropy_relative(space, lam, cert.beta, horizon)
