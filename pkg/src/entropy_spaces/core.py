"""Cover spaces, maps between them and the map taxonomy.

A cover space is described by a bundle of callables acting on opaque,
hashable payloads.  Backends (finite tables, open covers, subgroups, window
covers, tuples) decide what a payload is; everything generic in this package
only ever calls ``refines``, ``meet`` and ``norm``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Optional

from .extreal import DEFAULT_TOL


class SpaceMismatch(ValueError):
    """A payload was handed to a space it does not belong to."""


class BudgetExceeded(RuntimeError):
    """An iterative computation ran past its step budget.

    This signals a resource limit, never a mathematical failure.
    """


class PreconditionError(ValueError):
    """An operation's hypotheses are not met (e.g. a map is not a morphism)."""


DEFAULT_BUDGET = 1_000_000


class Budget:
    """Counts work steps and raises :class:`BudgetExceeded` past ``limit``."""

    def __init__(self, limit: Optional[int] = DEFAULT_BUDGET, what: str = "computation"):
        self.limit = limit
        self.used = 0
        self.what = what

    def step(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"{self.what} exceeded budget of {self.limit} steps")


@dataclass(frozen=True)
class CoverSpace:
    """An entropy space given by its operations.

    ``unit`` is ``None`` when the space has no declared unit.  ``elements``
    is the exhaustive enumeration for finite spaces (up to the backend's
    canonical representatives); ``cofinal_family`` maps ``k = 0, 1, ...`` to
    a cofinal sequence of covers when the backend knows one.
    """

    name: str
    refines: Callable[[Any, Any], bool]
    meet: Callable[[Any, Any], Any]
    norm: Callable[[Any], float]
    unit: Any = None
    elements: Optional[tuple] = None
    cofinal_family: Optional[Callable[[int], Any]] = None
    meet_space: bool = False
    commutative: bool = False
    contains: Optional[Callable[[Any], bool]] = None
    tol: float = DEFAULT_TOL

    @property
    def finite(self) -> bool:
        return self.elements is not None

    @property
    def has_unit(self) -> bool:
        return self.unit is not None

    def check_member(self, *covers) -> None:
        if self.contains is None:
            return
        for c in covers:
            if not self.contains(c):
                raise SpaceMismatch(f"{c!r} is not a cover of space {self.name!r}")

    def equivalent(self, a, b) -> bool:
        return self.refines(a, b) and self.refines(b, a)

    def meet_all(self, covers: Iterable) -> Any:
        """Left-associated meet of a nonempty sequence."""
        it = iter(covers)
        try:
            acc = next(it)
        except StopIteration:
            raise ValueError("meet of an empty family") from None
        for c in it:
            acc = self.meet(acc, c)
        return acc

    def renormed(self, norm: Callable[[Any], float], name: Optional[str] = None) -> "CoverSpace":
        return replace(self, norm=norm, name=name or f"{self.name}[renormed]")


def equivalent(space: CoverSpace, a, b) -> bool:
    """``a ~ b``: each refines the other."""
    space.check_member(a, b)
    return space.equivalent(a, b)


class Axiom(str, enum.Enum):
    MONOTONE = "monotone"
    L1 = "L1"
    L2 = "L2"
    U1 = "U1"
    U2 = "U2"
    M1 = "M1"
    M2 = "M2"
    BIJECTIVE = "bijective"  # bijective with a homomorphic inverse


class MapClass(str, enum.Enum):
    MONOTONE = "monotone"
    LOWER_MAP = "lower_map"
    UPPER_MAP = "upper_map"
    MORPHISM = "morphism"
    LOWER_MORPHISM = "lower_morphism"
    UPPER_MORPHISM = "upper_morphism"
    HOMOMORPHISM = "homomorphism"
    ISOMORPHISM = "isomorphism"


A = Axiom
CLASS_AXIOMS: dict[MapClass, frozenset] = {
    MapClass.MONOTONE: frozenset({A.MONOTONE}),
    MapClass.LOWER_MAP: frozenset({A.MONOTONE, A.L1, A.L2}),
    MapClass.UPPER_MAP: frozenset({A.MONOTONE, A.U1, A.U2}),
    MapClass.MORPHISM: frozenset({A.MONOTONE, A.M1}),
    MapClass.LOWER_MORPHISM: frozenset({A.MONOTONE, A.M1, A.L2}),
    MapClass.UPPER_MORPHISM: frozenset({A.MONOTONE, A.M1, A.U2}),
    MapClass.HOMOMORPHISM: frozenset({A.MONOTONE, A.M1, A.M2}),
    MapClass.ISOMORPHISM: frozenset({A.MONOTONE, A.M1, A.M2, A.BIJECTIVE}),
}


def axiom_closure(axioms: Iterable[Axiom]) -> frozenset:
    s = set(axioms)
    if A.M1 in s:
        s |= {A.L1, A.U1}
    if A.M2 in s:
        s |= {A.L2, A.U2}
    if A.L1 in s and A.U1 in s:
        s.add(A.M1)
    if A.L2 in s and A.U2 in s:
        s.add(A.M2)
    return frozenset(s)


def implies(cls: MapClass, target: MapClass) -> bool:
    """Whether every map of class ``cls`` is of class ``target``."""
    return axiom_closure(CLASS_AXIOMS[target]) <= axiom_closure(CLASS_AXIOMS[cls])


def classes_from_axioms(axioms: Iterable[Axiom]) -> list[MapClass]:
    closed = axiom_closure(axioms)
    return [c for c in MapClass if axiom_closure(CLASS_AXIOMS[c]) <= closed]


def strongest_class(axioms: Iterable[Axiom]) -> Optional[MapClass]:
    found = classes_from_axioms(axioms)
    if not found:
        return None
    return max(found, key=lambda c: len(axiom_closure(CLASS_AXIOMS[c])))


def meet_class(classes: Iterable[MapClass]) -> MapClass:
    """Strongest class implied by every class in ``classes``."""
    common = None
    for c in classes:
        ax = axiom_closure(CLASS_AXIOMS[c])
        common = ax if common is None else common & ax
    if common is None:
        raise ValueError("meet of no classes")
    return strongest_class(common) or MapClass.MONOTONE


@dataclass(frozen=True)
class SelfMap:
    """A map of a cover space into itself.

    ``inverse_apply`` is present for bijective maps; ``closed_form`` may
    return the exact relative entropy of a cover (or ``None`` if unknown).
    """

    apply: Callable[[Any], Any]
    declared_class: MapClass
    name: str = "λ"
    inverse_apply: Optional[Callable[[Any], Any]] = None
    closed_form: Optional[Callable[[Any], Optional[float]]] = None
    unital: bool = False

    def __call__(self, cover):
        return self.apply(cover)

    @property
    def has_inverse(self) -> bool:
        return self.inverse_apply is not None

    @property
    def inverse(self) -> "SelfMap":
        if self.inverse_apply is None:
            raise PreconditionError(f"map {self.name} has no inverse")
        return SelfMap(
            apply=self.inverse_apply,
            declared_class=self.declared_class,
            name=f"{self.name}^-1",
            inverse_apply=self.apply,
            unital=self.unital,
        )

    @property
    def is_lower(self) -> bool:
        return implies(self.declared_class, MapClass.LOWER_MAP)


def identity_map(name: str = "id") -> SelfMap:
    ident = lambda c: c  # noqa: E731
    return SelfMap(ident, MapClass.ISOMORPHISM, name, inverse_apply=ident, unital=True)


def iterate(apply: Callable, cover, k: int):
    for _ in range(k):
        cover = apply(cover)
    return cover


def power_map(lam: SelfMap, m: int) -> SelfMap:
    """The ``m``-fold composite ``λ^m`` (negative ``m`` uses the inverse)."""
    if m == 0:
        return identity_map(f"{lam.name}^0")
    if m < 0:
        if not lam.has_inverse:
            raise PreconditionError("negative power of a map without inverse")
        if lam.declared_class is not MapClass.ISOMORPHISM:
            raise PreconditionError("negative powers are only defined for isomorphisms")
        lam = lam.inverse
        m = -m
    if m == 1:
        return lam
    base, inv = lam.apply, lam.inverse_apply
    return SelfMap(
        apply=lambda c: iterate(base, c, m),
        declared_class=lam.declared_class,
        name=f"{lam.name}^{m}",
        inverse_apply=(lambda c: iterate(inv, c, m)) if inv is not None else None,
        unital=lam.unital,
    )


@dataclass(frozen=True)
class SpaceMap:
    """A map ``source -> target`` between two cover spaces."""

    source: CoverSpace
    target: CoverSpace
    apply: Callable[[Any], Any]
    name: str = "μ"
    inverse_apply: Optional[Callable[[Any], Any]] = None
    declared_class: Optional[MapClass] = None

    def __call__(self, cover):
        return self.apply(cover)


def as_space_map(space: CoverSpace, lam: SelfMap) -> SpaceMap:
    return SpaceMap(space, space, lam.apply, lam.name, lam.inverse_apply, lam.declared_class)


@dataclass
class AxiomResult:
    passed: bool = True
    witness: Optional[tuple] = None
    checked: int = 0

    def fail(self, *witness) -> None:
        if self.passed:
            self.passed = False
            self.witness = witness


@dataclass
class AxiomReport:
    """Per-axiom pass/fail with the first failing witness of each."""

    results: dict[str, AxiomResult] = field(default_factory=dict)
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failures(self) -> dict[str, tuple]:
        return {k: r.witness for k, r in self.results.items() if not r.passed}

    def __getitem__(self, key: str) -> AxiomResult:
        return self.results[key]

    def summary(self) -> dict:
        return {
            k: {"passed": r.passed, "checked": r.checked, "witness": _fmt_witness(r.witness)}
            for k, r in self.results.items()
        }


@dataclass
class ClassReport(AxiomReport):
    classes: list = field(default_factory=list)
    strongest: Any = None

    def has(self, cls) -> bool:
        return cls in self.classes


def _fmt_witness(w):
    if w is None:
        return None
    return [repr(x) for x in w]
