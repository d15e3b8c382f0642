"""Empirical checkers for the cover-space, norm and map axioms.

Failures are data: every checker returns a report whose failed entries
carry the first witness found.  When the sample is not the whole space the
report is marked ``sampled`` and proves nothing beyond the sample.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional, Sequence

from .core import (
    Axiom,
    AxiomReport,
    AxiomResult,
    ClassReport,
    CoverSpace,
    SelfMap,
    SpaceMap,
    as_space_map,
    classes_from_axioms,
    strongest_class,
)
from .extreal import ext_add, ext_eq, ext_le


class _Table:
    """Caches ``refines`` and ``meet`` over a sample, indexing closed results."""

    def __init__(self, space: CoverSpace, sample: Sequence):
        self.space = space
        self.items = list(dict.fromkeys(sample))
        self.index = {c: i for i, c in enumerate(self.items)}
        self._ref: dict = {}
        self._meet: dict = {}
        self._norm: dict = {}

    def refines(self, a, b) -> bool:
        key = (a, b)
        r = self._ref.get(key)
        if r is None:
            r = bool(self.space.refines(a, b))
            self._ref[key] = r
        return r

    def equiv(self, a, b) -> bool:
        return self.refines(a, b) and self.refines(b, a)

    def meet(self, a, b):
        key = (a, b)
        try:
            return self._meet[key]
        except KeyError:
            m = self.space.meet(a, b)
            self._meet[key] = m
            return m

    def norm(self, a) -> float:
        try:
            return self._norm[a]
        except KeyError:
            v = self.space.norm(a)
            self._norm[a] = v
            return v


def _is_sampled(space: CoverSpace, sample) -> bool:
    if space.elements is None:
        return True
    return set(space.elements) - set(sample) != set()


def _resolve_sample(space: CoverSpace, sample):
    if sample is None:
        if space.elements is None:
            raise ValueError(f"space {space.name!r} is infinite; pass an explicit sample")
        sample = space.elements
    sample = list(sample)
    if not sample:
        raise ValueError("sample must be nonempty")
    space.check_member(*sample)
    return sample


def _triples(n: int, max_triples: Optional[int], seed: int):
    total = n ** 3
    if max_triples is None or total <= max_triples:
        return itertools.product(range(n), repeat=3), False
    rng = random.Random(seed)
    return ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(max_triples)), True


def check_cover_axioms(
    space: CoverSpace,
    sample: Optional[Sequence] = None,
    max_triples: Optional[int] = 200_000,
    seed: int = 0,
) -> AxiomReport:
    """Check pre-order, [C1], [C2], associativity and the claimed extras.

    [C2] is checked one argument at a time; together with transitivity this
    is equivalent to the two-argument form.
    """
    sample = _resolve_sample(space, sample)
    t = _Table(space, sample)
    items = t.items
    n = len(items)
    report = AxiomReport(sampled=_is_sampled(space, items))
    res = report.results
    for key in ("reflexive", "transitive", "C1", "C2", "associative"):
        res[key] = AxiomResult()
    if space.commutative:
        res["commutative"] = AxiomResult()
    if space.meet_space:
        res["meet_idempotent"] = AxiomResult()
    if space.unit is not None:
        res["unit"] = AxiomResult()

    R = [[t.refines(a, b) for b in items] for a in items]
    M = [[t.meet(a, b) for b in items] for a in items]

    for i, a in enumerate(items):
        res["reflexive"].checked += 1
        if not R[i][i]:
            res["reflexive"].fail(a)
    for i, j in itertools.product(range(n), repeat=2):
        if not R[i][j]:
            continue
        for k in range(n):
            if R[j][k]:
                res["transitive"].checked += 1
                if not R[i][k]:
                    res["transitive"].fail(items[i], items[j], items[k])

    for i, j in itertools.product(range(n), repeat=2):
        a, b, m = items[i], items[j], M[i][j]
        res["C1"].checked += 1
        if not (t.refines(m, a) and t.refines(m, b)):
            res["C1"].fail(a, b, m)
        if space.commutative:
            res["commutative"].checked += 1
            if not t.equiv(m, M[j][i]):
                res["commutative"].fail(a, b)

    # Meets that land back in the sample are handled by index, which keeps
    # the cubic loops free of hashing.
    idx = t.index
    MI = [[idx.get(m) for m in row] for row in M]

    for i, i2 in itertools.product(range(n), repeat=2):
        if not R[i][i2]:
            continue
        for j in range(n):
            res["C2"].checked += 2
            x, y = MI[i][j], MI[i2][j]
            ok = R[x][y] if x is not None and y is not None else t.refines(M[i][j], M[i2][j])
            if not ok:
                res["C2"].fail(items[i], items[i2], items[j])
            x, y = MI[j][i], MI[j][i2]
            ok = R[x][y] if x is not None and y is not None else t.refines(M[j][i], M[j][i2])
            if not ok:
                res["C2"].fail(items[j], items[i], items[i2])

    triples, truncated = _triples(n, max_triples, seed)
    if truncated:
        report.sampled = True
    for i, j, k in triples:
        res["associative"].checked += 1
        ij, jk = MI[i][j], MI[j][k]
        if ij is not None and jk is not None:
            x, y = MI[ij][k], MI[i][jk]
            if x is not None and y is not None:
                if not (R[x][y] and R[y][x]):
                    res["associative"].fail(items[i], items[j], items[k])
                continue
        left = t.meet(M[i][j], items[k])
        right = t.meet(items[i], M[j][k])
        if not t.equiv(left, right):
            res["associative"].fail(items[i], items[j], items[k])

    if space.meet_space:
        for i, a in enumerate(items):
            res["meet_idempotent"].checked += 1
            if not t.equiv(M[i][i], a):
                res["meet_idempotent"].fail(a)

    if space.unit is not None:
        u = space.unit
        for a in items:
            res["unit"].checked += 1
            if not (t.refines(a, u) and t.equiv(t.meet(u, a), a) and t.equiv(t.meet(a, u), a)):
                res["unit"].fail(a)
    return report


def check_norm_axioms(space: CoverSpace, sample: Optional[Sequence] = None) -> AxiomReport:
    """Check [H1] (antitone) and [H2] (subadditive) on the sample."""
    sample = _resolve_sample(space, sample)
    t = _Table(space, sample)
    items = t.items
    tol = space.tol
    report = AxiomReport(sampled=_is_sampled(space, items))
    res = report.results
    res["nonnegative"] = AxiomResult()
    res["H1"] = AxiomResult()
    res["H2"] = AxiomResult()
    h = {a: t.norm(a) for a in items}
    for a in items:
        res["nonnegative"].checked += 1
        if not h[a] >= 0:
            res["nonnegative"].fail(a, h[a])
    for a, b in itertools.product(items, repeat=2):
        if t.refines(a, b):
            res["H1"].checked += 1
            if not ext_le(h[b], h[a], tol):
                res["H1"].fail(a, b, h[a], h[b])
        m = t.meet(a, b)
        res["H2"].checked += 1
        if not ext_le(t.norm(m), ext_add(h[a], h[b]), tol):
            res["H2"].fail(a, b, t.norm(m), h[a], h[b])
    if space.unit is not None:
        res["unit_norm"] = AxiomResult(checked=1)
        if not ext_eq(t.norm(space.unit), 0.0, tol):
            res["unit_norm"].fail(space.unit, t.norm(space.unit))
    return report


def _map_axioms(mu: SpaceMap, sample, report: ClassReport) -> None:
    src, tgt = mu.source, mu.target
    ts, tt = _Table(src, sample), _Table(tgt, [])
    tol = max(src.tol, tgt.tol)
    items = ts.items
    res = report.results
    for key in ("monotone", "L1", "U1", "L2", "U2"):
        res[key] = AxiomResult()
    img = {a: mu.apply(a) for a in items}
    tgt.check_member(*img.values())
    for a, b in itertools.product(items, repeat=2):
        if ts.refines(a, b):
            res["monotone"].checked += 1
            if not tt.refines(img[a], img[b]):
                res["monotone"].fail(a, b)
        lhs = mu.apply(ts.meet(a, b))
        rhs = tt.meet(img[a], img[b])
        res["L1"].checked += 1
        res["U1"].checked += 1
        if not tt.refines(lhs, rhs):
            res["L1"].fail(a, b)
        if not tt.refines(rhs, lhs):
            res["U1"].fail(a, b)
    for a in items:
        ha, hl = ts.norm(a), tt.norm(img[a])
        res["L2"].checked += 1
        res["U2"].checked += 1
        if not ext_le(hl, ha, tol):
            res["L2"].fail(a, hl, ha)
        if not ext_le(ha, hl, tol):
            res["U2"].fail(a, hl, ha)
    res["M1"] = AxiomResult(res["L1"].passed and res["U1"].passed, res["L1"].witness or res["U1"].witness, res["L1"].checked)
    res["M2"] = AxiomResult(res["L2"].passed and res["U2"].passed, res["L2"].witness or res["U2"].witness, res["L2"].checked)

    if mu.inverse_apply is not None:
        inv = SpaceMap(tgt, src, mu.inverse_apply, f"{mu.name}^-1", mu.apply)
        res["bijective"] = AxiomResult()
        for a in items:
            res["bijective"].checked += 1
            if not src.equivalent(inv.apply(img[a]), a):
                res["bijective"].fail(a)
        inv_sample = list(tgt.elements) if tgt.elements is not None else list(img.values())
        for b in inv_sample:
            res["bijective"].checked += 1
            if not tgt.equivalent(mu.apply(inv.apply(b)), b):
                res["bijective"].fail(b)
        inv_report = ClassReport()
        _map_axioms(SpaceMap(tgt, src, mu.inverse_apply, inv.name), inv_sample, inv_report)
        if not all(inv_report.results[k].passed for k in ("monotone", "M1", "M2")):
            res["bijective"].fail("inverse is not a homomorphism", inv_report.failures())


def _passed_axioms(report: AxiomReport) -> set:
    names = {a.value: a for a in Axiom}
    return {names[k] for k, r in report.results.items() if k in names and r.passed}


def classify_space_map(mu: SpaceMap, sample: Optional[Sequence] = None) -> ClassReport:
    """Classify a map between two spaces against the map taxonomy."""
    sample = _resolve_sample(mu.source, sample)
    report = ClassReport(sampled=_is_sampled(mu.source, sample))
    _map_axioms(mu, sample, report)
    ax = _passed_axioms(report)
    if Axiom.MONOTONE in ax:
        report.classes = classes_from_axioms(ax)
        report.strongest = strongest_class(ax)
    return report


def classify_map(space: CoverSpace, lam: SelfMap, sample: Optional[Sequence] = None) -> ClassReport:
    """Classify a self-map; sampled reports never upgrade the declared class."""
    return classify_space_map(as_space_map(space, lam), sample)


def verify_declared_class(space: CoverSpace, lam: SelfMap, sample: Optional[Sequence] = None) -> bool:
    return classify_map(space, lam, sample).has(lam.declared_class)
