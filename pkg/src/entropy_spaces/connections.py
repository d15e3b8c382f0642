"""Connections between dynamical pairs and the entropy comparisons they license."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .axioms import _is_sampled, _resolve_sample, classify_space_map
from .core import AxiomResult, ClassReport, MapClass, SelfMap, SpaceMap
from .entropy import EntropyEstimate, entropy_relative
from .extreal import ext_le


class ConnectionClass(str, enum.Enum):
    LOWER = "lower_connection"
    UPPER = "upper_connection"
    CONNECTION = "connection"
    CONJUGATION = "conjugation"


class Cofinality(str, enum.Enum):
    YES = "yes-certified"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Connection:
    """``μ: λ₁ → λ₂`` where ``μ`` maps the source space to the target space."""

    mu: SpaceMap
    source_map: SelfMap
    target_map: SelfMap
    declared_class: Optional[ConnectionClass] = None

    @property
    def source(self):
        return self.mu.source

    @property
    def target(self):
        return self.mu.target


@dataclass
class ConnectionReport(ClassReport):
    cofinal: Cofinality = Cofinality.UNKNOWN
    cofinal_witness: Optional[tuple] = None
    map_report: Optional[ClassReport] = field(default=None, repr=False)


def check_cofinal_image(mu: SpaceMap, sample: Sequence) -> tuple[Cofinality, Optional[tuple]]:
    """Certify that ``μ(sample)`` gets below every element of an enumerable target.

    A miss is a definite ``no`` only when the sample is the whole source.
    """
    tgt = mu.target
    if tgt.elements is None:
        return Cofinality.UNKNOWN, None
    images = [mu.apply(a) for a in sample]
    for b in tgt.elements:
        if not any(tgt.refines(x, b) for x in images):
            if _is_sampled(mu.source, sample):
                return Cofinality.UNKNOWN, (b,)
            return Cofinality.NO, (b,)
    return Cofinality.YES, None


def classify_connection(conn: Connection, sample: Optional[Sequence] = None) -> ConnectionReport:
    """Map axioms of ``μ`` plus [L3]/[U3]/[M3] and cofinality of the image."""
    mu = conn.mu
    sample = _resolve_sample(mu.source, sample)
    mrep = classify_space_map(mu, sample)
    report = ConnectionReport(sampled=mrep.sampled, map_report=mrep)
    report.results.update(mrep.results)
    tgt = mu.target
    l3, u3 = AxiomResult(), AxiomResult()
    for a in sample:
        lhs = mu.apply(conn.source_map.apply(a))
        rhs = conn.target_map.apply(mu.apply(a))
        l3.checked += 1
        u3.checked += 1
        if not tgt.refines(lhs, rhs):
            l3.fail(a)
        if not tgt.refines(rhs, lhs):
            u3.fail(a)
    report.results["L3"] = l3
    report.results["U3"] = u3
    report.results["M3"] = AxiomResult(l3.passed and u3.passed, l3.witness or u3.witness, l3.checked)
    report.cofinal, report.cofinal_witness = check_cofinal_image(mu, sample)

    classes = []
    if mrep.has(MapClass.LOWER_MAP) and l3.passed:
        classes.append(ConnectionClass.LOWER)
    if mrep.has(MapClass.UPPER_MAP) and u3.passed:
        classes.append(ConnectionClass.UPPER)
    if mrep.has(MapClass.HOMOMORPHISM) and l3.passed and u3.passed:
        classes.append(ConnectionClass.CONNECTION)
        if mrep.has(MapClass.ISOMORPHISM):
            classes.append(ConnectionClass.CONJUGATION)
    report.classes = classes
    report.strongest = classes[-1] if classes else None
    return report


@dataclass(frozen=True)
class Verdict:
    relation: Optional[str]  # "<=", ">=", "=" or None
    justification: str

    def holds(self, h1: float, h2: float, tol: float = 1e-9) -> bool:
        if self.relation is None:
            return True
        if self.relation == "<=":
            return ext_le(h1, h2, tol)
        if self.relation == ">=":
            return ext_le(h2, h1, tol)
        return ext_le(h1, h2, tol) and ext_le(h2, h1, tol)


def compare_entropy(conn: Connection, report: ConnectionReport) -> Verdict:
    """The relation between ``h(λ₁)`` and ``h(λ₂)`` licensed by the report."""
    if not report.classes:
        return Verdict(None, "μ is not a lower, upper or full connection")
    cls = set(report.classes)
    cofinal = report.cofinal is Cofinality.YES
    if ConnectionClass.CONJUGATION in cls:
        return Verdict("=", "conjugation: h(λ₁) = h(λ₂)")
    if ConnectionClass.CONNECTION in cls and cofinal:
        return Verdict("=", "cofinal connection: h(λ₁) = h(λ₂)")
    if ConnectionClass.UPPER in cls and ConnectionClass.LOWER in cls and cofinal:
        return Verdict("=", "upper connection and cofinal lower connection")
    if ConnectionClass.UPPER in cls:
        return Verdict("<=", "upper connection: h(λ₁) ≤ h(λ₂)")
    if ConnectionClass.LOWER in cls and cofinal:
        return Verdict(">=", "cofinal lower connection: h(λ₁) ≥ h(λ₂)")
    return Verdict(None, f"lower connection without certified cofinality ({report.cofinal.value})")


@dataclass
class PerCoverComparison:
    alpha: object
    source: EntropyEstimate
    target: EntropyEstimate
    relation: str
    holds_at: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.holds_at)


def per_cover_comparison(
    conn: Connection,
    report: ConnectionReport,
    alpha,
    horizon: int,
) -> Optional[PerCoverComparison]:
    """Compare ``a_n(λ₁, α)`` with ``a_n(λ₂, μα)`` for every ``n ≤ horizon``.

    Upper connections give ``≤`` and lower ones ``≥`` at each ``n``; full
    connections give equality of the two sequences.
    """
    cls = set(report.classes)
    if ConnectionClass.CONNECTION in cls or {ConnectionClass.UPPER, ConnectionClass.LOWER} <= cls:
        rel = "="
    elif ConnectionClass.UPPER in cls:
        rel = "<="
    elif ConnectionClass.LOWER in cls:
        rel = ">="
    else:
        return None
    e1 = entropy_relative(conn.source, conn.source_map, alpha, horizon)
    e2 = entropy_relative(conn.target, conn.target_map, conn.mu.apply(alpha), horizon)
    tol = max(conn.source.tol, conn.target.tol)
    v = Verdict(rel, "")
    holds = [v.holds(x, y, tol) for x, y in zip(e1.a_seq, e2.a_seq)]
    return PerCoverComparison(alpha, e1, e2, rel, holds)
