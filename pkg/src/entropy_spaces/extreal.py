"""Arithmetic on the extended half-line [0, inf].

Values are plain floats with ``math.inf`` standing for infinity.  The only
place where IEEE semantics disagree with the conventions used here is the
product ``0 * inf``, which is ``inf`` (not ``nan``), so multiplication must
go through :func:`ext_mul`.
"""

from __future__ import annotations

import math

INF = math.inf
DEFAULT_TOL = 1e-9


def check_ext(a: float) -> float:
    """Validate that ``a`` is an element of [0, inf] and return it as a float."""
    a = float(a)
    if math.isnan(a) or a < 0:
        raise ValueError(f"not an element of [0, inf]: {a!r}")
    return a


def ext_add(a: float, b: float) -> float:
    return check_ext(a) + check_ext(b)


def ext_mul(a: float, b: float) -> float:
    a, b = check_ext(a), check_ext(b)
    if math.isinf(a) or math.isinf(b):
        return INF
    return a * b


def ext_cmp(a: float, b: float, tol: float = DEFAULT_TOL) -> int:
    """Three-way comparison: -1, 0 or 1.

    Infinity is compared exactly; finite values within ``tol`` are equal.
    """
    a, b = check_ext(a), check_ext(b)
    if math.isinf(a) or math.isinf(b):
        return (a > b) - (a < b)
    if abs(a - b) <= tol:
        return 0
    return 1 if a > b else -1


def extreal_arith(a: float, b: float, op: str, tol: float = DEFAULT_TOL):
    """Dispatch ``op`` in {"add", "mul", "cmp"}.

    ``cmp`` returns one of ``"less"``, ``"equal"``, ``"greater"``.
    """
    if op == "add":
        return ext_add(a, b)
    if op == "mul":
        return ext_mul(a, b)
    if op == "cmp":
        return ("less", "equal", "greater")[ext_cmp(a, b, tol) + 1]
    raise ValueError(f"unknown op {op!r}")


def ext_le(a: float, b: float, tol: float = DEFAULT_TOL) -> bool:
    return ext_cmp(a, b, tol) <= 0


def ext_eq(a: float, b: float, tol: float = DEFAULT_TOL) -> bool:
    return ext_cmp(a, b, tol) == 0


def ext_log(n: int) -> float:
    """Natural log extended by log 0 = 0 and log inf = inf."""
    if n == INF:
        return INF
    if n < 0:
        raise ValueError("log of a negative cardinality")
    return 0.0 if n == 0 else math.log(n)


def logsumexp2(a: float, b: float) -> float:
    """log(e^a + e^b) on [0, inf]."""
    a, b = check_ext(a), check_ext(b)
    if math.isinf(a) or math.isinf(b):
        return INF
    hi, lo = max(a, b), min(a, b)
    return hi + math.log1p(math.exp(lo - hi))
