"""Finite-horizon checks of the entropy laws.

Each check computes the relevant ``a_n`` sequences and compares them at
every ``n`` up to the horizon; nothing here needs a limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .connections import Connection, classify_connection, compare_entropy, per_cover_comparison
from .core import CoverSpace, PreconditionError, SelfMap, power_map
from .entropy import entropy, entropy_relative, trajectory_meet
from .extreal import DEFAULT_TOL, ext_add, ext_eq, ext_le, logsumexp2


@dataclass
class LawResult:
    law: str
    holds: bool
    checked: int
    detail: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    def as_dict(self) -> dict:
        out = {"law": self.law, "holds": self.holds, "checked": self.checked, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _first_failure(pairs, rel, tol):
    for n, (x, y) in enumerate(pairs, start=1):
        if not rel(x, y, tol):
            return {"n": n, "lhs": x, "rhs": y}
    return None


def log_law(space: CoverSpace, lam: SelfMap, alpha, m: int, horizon: int, tol: float = DEFAULT_TOL) -> LawResult:
    """Power law at finite horizon for a lower map on a meet space.

    With ``β = α₀^{m−1}`` this checks ``a_n(λᵐ, β) ≥ a_{mn}(λ, α)`` and
    ``a_n(λᵐ, α) ≤ a_{mn}(λ, α)``; dividing by ``n`` gives the two quotient
    inequalities ``q_n(λᵐ, β) ≥ m·q_{mn}(λ, α) ≥ q_n(λᵐ, α)``.  For
    ``m = 0`` only the identity case is checked: the entropy is 0.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if not lam.is_lower:
        raise PreconditionError(f"{lam.name} is not declared a lower map")
    if not space.meet_space:
        raise PreconditionError("the power law check needs a meet space")
    lam_m = power_map(lam, m)
    if m == 0:
        e = entropy_relative(space, lam_m, alpha, horizon)
        ok = e.exact is not None and ext_eq(e.exact, 0.0, tol)
        return LawResult("power law (m=0)", ok, 1, {"value": e.value, "reason": e.reason})
    base = entropy_relative(space, lam, alpha, m * horizon)
    beta = trajectory_meet(space, lam, alpha, 0, m - 1)
    block = entropy_relative(space, lam_m, beta, horizon)
    plain = entropy_relative(space, lam_m, alpha, horizon)
    stride = [base.a_seq[m * n - 1] for n in range(1, horizon + 1)]
    w1 = _first_failure(zip(stride, block.a_seq), ext_le, tol)
    w2 = _first_failure(zip(plain.a_seq, stride), ext_le, tol)
    detail = {
        "m": m,
        "block_quotients": block.quotients,
        "scaled_base_quotients": [m * q for q in (base.quotients[m * n - 1] for n in range(1, horizon + 1))],
        "plain_quotients": plain.quotients,
        "block_value": block.value,
        "block_label": block.label,
    }
    witness = None
    if w1:
        witness = {"inequality": "a_n(λᵐ, α₀^{m−1}) ≥ a_mn(λ, α)", **w1}
    elif w2:
        witness = {"inequality": "a_n(λᵐ, α) ≤ a_mn(λ, α)", **w2}
    return LawResult(f"power law (m={m})", witness is None, 2 * horizon, detail, witness)


def product_additivity(
    product: CoverSpace,
    product_lam: SelfMap,
    factors: Sequence[CoverSpace],
    maps: Sequence[SelfMap],
    alpha: tuple,
    horizon: int,
    tol: float = DEFAULT_TOL,
) -> LawResult:
    """``a_n`` of the product map at ``(α₁, …, α_k)`` is the sum of the factor ``a_n``."""
    whole = entropy_relative(product, product_lam, alpha, horizon)
    parts = [entropy_relative(s, f, a, horizon) for s, f, a in zip(factors, maps, alpha)]
    sums = []
    for n in range(horizon):
        total = 0.0
        for p in parts:
            total = ext_add(total, p.a_seq[n])
        sums.append(total)
    w = _first_failure(zip(whole.a_seq, sums), ext_eq, tol)
    detail = {"quotients": whole.quotients, "value": whole.value, "label": whole.label}
    return LawResult("product additivity", w is None, horizon, detail, w)


def coproduct_additivity(
    coproduct: CoverSpace,
    coproduct_lam: SelfMap,
    base: CoverSpace,
    lam: SelfMap,
    tup,
    horizon: int,
    tol: float = DEFAULT_TOL,
) -> LawResult:
    """``a_n`` of a componentwise map at a tuple is the sum over its support."""
    whole = entropy_relative(coproduct, coproduct_lam, tup, horizon)
    parts = [entropy_relative(base, lam, a, horizon) for _, a in tup.entries]
    sums = []
    for n in range(horizon):
        total = 0.0
        for p in parts:
            total = ext_add(total, p.a_seq[n])
        sums.append(total)
    w = _first_failure(zip(whole.a_seq, sums), ext_eq, tol)
    return LawResult("coproduct additivity", w is None, horizon, {"support": list(tup.support)}, w)


def f_product_law(
    fspace: CoverSpace,
    flam: SelfMap,
    spaces: Sequence[CoverSpace],
    maps: Sequence[SelfMap],
    alpha: tuple,
    horizon: int,
    tol: float = DEFAULT_TOL,
) -> LawResult:
    """Quotients of the log-sum-exp product equal ``(1/n)·log(e^{a_n} + e^{b_n})``;
    the reported value is compared against the larger factor entropy."""
    whole = entropy_relative(fspace, flam, alpha, horizon)
    e1 = entropy_relative(spaces[0], maps[0], alpha[0], horizon)
    e2 = entropy_relative(spaces[1], maps[1], alpha[1], horizon)
    expected = [logsumexp2(x, y) / n for n, (x, y) in enumerate(zip(e1.a_seq, e2.a_seq), start=1)]
    w = _first_failure(zip(whole.quotients, expected), ext_eq, tol)
    detail = {
        "quotients": whole.quotients,
        "factor_values": [e1.value, e2.value],
        "max_factor": max(e1.value, e2.value),
        "gap_at_horizon": whole.quotients[-1] - max(e1.value, e2.value),
    }
    return LawResult("f-product max law", w is None, horizon, detail, w)


def shift_law(system, alpha, horizon: int, tol: float = DEFAULT_TOL) -> LawResult:
    """For the shift over a base map, ``a_n(s, ᾱ) = Σ_{k<n} h(λᵏα)``."""
    base, lam = system.base, system.base_map
    est = entropy_relative(system.space, system.shift, system.embed(alpha), horizon)
    expected, total, cur = [], 0.0, alpha
    for _ in range(horizon):
        total = ext_add(total, base.norm(cur))
        expected.append(total)
        cur = lam.apply(cur)
    w = _first_failure(zip(est.a_seq, expected), ext_eq, tol)
    detail = {"value": est.value, "label": est.label, "reason": est.reason, "base_norm": base.norm(alpha)}
    return LawResult("shift entropy", w is None, horizon, detail, w)


def comparison_law(conn: Connection, covers: Sequence, horizon: int, sample=None) -> LawResult:
    """Classify the connection, then test the licensed per-cover relation."""
    report = classify_connection(conn, sample)
    verdict = compare_entropy(conn, report)
    detail = {
        "classes": [c.value for c in report.classes],
        "cofinal": report.cofinal.value,
        "verdict": verdict.relation,
        "justification": verdict.justification,
    }
    checked, witness = 0, None
    for a in covers:
        pc = per_cover_comparison(conn, report, a, horizon)
        if pc is None:
            break
        checked += len(pc.holds_at)
        if not pc.ok:
            n = pc.holds_at.index(False) + 1
            witness = {"cover": repr(a), "n": n, "relation": pc.relation}
            break
    if verdict.relation is not None and conn.source.elements is not None and conn.target.elements is not None:
        h1 = entropy(conn.source, conn.source_map, list(conn.source.elements), horizon).value
        h2 = entropy(conn.target, conn.target_map, list(conn.target.elements), horizon).value
        detail["entropies"] = [h1, h2]
        checked += 1
        if witness is None and not verdict.holds(h1, h2, max(conn.source.tol, conn.target.tol)):
            witness = {"entropies": [h1, h2], "relation": verdict.relation}
    return LawResult("comparison", witness is None, checked, detail, witness)

