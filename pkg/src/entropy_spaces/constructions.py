"""Products, f-products, unit adjunction, quotients, coproducts, shifts and
finite direct limits."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .core import (
    CoverSpace,
    MapClass,
    PreconditionError,
    SelfMap,
    SpaceMap,
    implies,
    meet_class,
)
from .extreal import INF, check_ext, ext_add, ext_le, logsumexp2

# -- products ---------------------------------------------------------------


def _product_carrier(spaces: Sequence[CoverSpace], name: str, norm: Callable) -> CoverSpace:
    spaces = tuple(spaces)
    if not spaces:
        raise ValueError("product of no spaces")
    k = len(spaces)

    def refines(a, b):
        return all(s.refines(x, y) for s, x, y in zip(spaces, a, b))

    def meet(a, b):
        return tuple(s.meet(x, y) for s, x, y in zip(spaces, a, b))

    def contains(a):
        return (
            isinstance(a, tuple)
            and len(a) == k
            and all(s.contains is None or s.contains(x) for s, x in zip(spaces, a))
        )

    elements = None
    if all(s.elements is not None for s in spaces):
        elements = tuple(itertools.product(*(s.elements for s in spaces)))
    unit = None
    if all(s.unit is not None for s in spaces):
        unit = tuple(s.unit for s in spaces)
    cofinal = None
    if all(s.cofinal_family is not None for s in spaces):
        cofinal = lambda i: tuple(s.cofinal_family(i) for s in spaces)  # noqa: E731
    return CoverSpace(
        name=name,
        refines=refines,
        meet=meet,
        norm=norm,
        unit=unit,
        elements=elements,
        cofinal_family=cofinal,
        meet_space=all(s.meet_space for s in spaces),
        commutative=all(s.commutative for s in spaces),
        contains=contains,
        tol=min(s.tol for s in spaces),
    )


def product_space(spaces: Sequence[CoverSpace]) -> CoverSpace:
    """Componentwise order and meet, norm the sum of component norms."""
    spaces = tuple(spaces)

    def norm(a):
        total = 0.0
        for s, x in zip(spaces, a):
            total = ext_add(total, s.norm(x))
        return total

    return _product_carrier(spaces, "×".join(s.name for s in spaces), norm)


def _componentwise(maps: Sequence[SelfMap], combine: Callable[[list], float], name: str) -> SelfMap:
    maps = tuple(maps)
    inverse = None
    if all(m.inverse_apply is not None for m in maps):
        inverse = lambda a: tuple(m.inverse_apply(x) for m, x in zip(maps, a))  # noqa: E731
    closed = None
    if all(m.closed_form is not None and m.is_lower for m in maps):

        def closed(a):
            vals = [m.closed_form(x) for m, x in zip(maps, a)]
            if any(v is None for v in vals):
                return None
            return combine(vals)

    return SelfMap(
        apply=lambda a: tuple(m.apply(x) for m, x in zip(maps, a)),
        declared_class=meet_class(m.declared_class for m in maps),
        name=name,
        inverse_apply=inverse,
        closed_form=closed,
        unital=all(m.unital for m in maps),
    )


def product_map(spaces: Sequence[CoverSpace], maps: Sequence[SelfMap]) -> SelfMap:
    """Induced product map; for lower maps its relative entropy is the sum."""
    if len(spaces) != len(maps):
        raise ValueError(f"{len(spaces)} spaces but {len(maps)} maps")

    def total(vals):
        acc = 0.0
        for v in vals:
            acc = ext_add(acc, v)
        return acc

    return _componentwise(maps, total, "×".join(m.name for m in maps))


def projection(product: CoverSpace, factor: CoverSpace, i: int) -> SpaceMap:
    return SpaceMap(product, factor, lambda a: a[i], f"π{i}", declared_class=MapClass.LOWER_MORPHISM)


# -- f-products -------------------------------------------------------------

F_GRID = (0.0, 0.5, math.log(2), 1.0, math.log(5), 3.0, INF)


def validate_combiner(f: Callable[[float, float], float], grid: Iterable[float] = F_GRID, tol: float = 1e-9):
    """Sampled check that ``f`` is monotone and subadditive on a grid.

    Returns ``None`` on success, else a witness tuple ``(kind, args...)``.
    """
    grid = list(grid)
    for a1, a2, b1, b2 in itertools.product(grid, repeat=4):
        fa = check_ext(f(a1, a2))
        if a1 <= b1 and a2 <= b2 and not ext_le(fa, f(b1, b2), tol):
            return ("monotone", a1, a2, b1, b2)
        if not ext_le(f(a1 + b1, a2 + b2), ext_add(fa, f(b1, b2)), tol):
            return ("subadditive", a1, a2, b1, b2)
    return None


def f_product_space(
    s1: CoverSpace,
    s2: CoverSpace,
    f: Callable[[float, float], float] = logsumexp2,
    validate: bool = True,
) -> CoverSpace:
    """Product carrier with norm ``f(h₁(α₁), h₂(α₂))``.

    With the default log-sum-exp combiner the all-units pair has norm log 2,
    so no unit is declared on the result.
    """
    if validate and f is not logsumexp2:
        bad = validate_combiner(f)
        if bad is not None:
            raise PreconditionError(f"combiner is not monotone and subadditive: {bad}")
    sp = _product_carrier((s1, s2), f"{s1.name}×f{s2.name}", lambda a: f(s1.norm(a[0]), s2.norm(a[1])))
    return replace(sp, unit=None)


def f_product_map(m1: SelfMap, m2: SelfMap) -> SelfMap:
    """Induced map on an f-product; for log-sum-exp and lower maps the
    relative entropy is the max of the component values."""
    return _componentwise((m1, m2), max, f"{m1.name}×f{m2.name}")


# -- unit adjunction and quotients ----------------------------------------


class _Unit:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "𝟙"

    def __reduce__(self):
        return (_Unit, ())


UNIT = _Unit()


def adjoin_unit(space: CoverSpace) -> CoverSpace:
    """Add a fresh top element ``UNIT`` with norm 0."""
    base = space

    def refines(a, b):
        if b is UNIT:
            return True
        if a is UNIT:
            return False
        return base.refines(a, b)

    def meet(a, b):
        if a is UNIT:
            return b
        if b is UNIT:
            return a
        return base.meet(a, b)

    def norm(a):
        return 0.0 if a is UNIT else base.norm(a)

    def contains(a):
        return a is UNIT or base.contains is None or base.contains(a)

    elements = None if base.elements is None else tuple(base.elements) + (UNIT,)
    return CoverSpace(
        name=f"{base.name}+1",
        refines=refines,
        meet=meet,
        norm=norm,
        unit=UNIT,
        elements=elements,
        cofinal_family=base.cofinal_family,
        meet_space=base.meet_space,
        commutative=base.commutative,
        contains=contains,
        tol=base.tol,
    )


def extend_unital(lam: SelfMap) -> SelfMap:
    """Extend a map to ``adjoin_unit(space)`` by fixing ``UNIT``."""
    f, g = lam.apply, lam.inverse_apply
    closed = lam.closed_form
    return SelfMap(
        apply=lambda a: UNIT if a is UNIT else f(a),
        declared_class=lam.declared_class,
        name=lam.name,
        inverse_apply=(lambda a: UNIT if a is UNIT else g(a)) if g is not None else None,
        closed_form=(lambda a: 0.0 if a is UNIT else closed(a)) if closed is not None else None,
        unital=True,
    )


def quotient_space(space: CoverSpace) -> tuple[CoverSpace, SpaceMap]:
    """Collapse ``~``-classes of a finite space, returning the projection.

    Classes are frozensets of original elements; representatives are the
    first member in enumeration order.
    """
    if space.elements is None:
        raise PreconditionError("quotient needs an enumerable space")
    classes: list[list] = []
    for a in space.elements:
        for cls in classes:
            if space.equivalent(a, cls[0]):
                cls.append(a)
                break
        else:
            classes.append([a])
    of = {}
    for cls in classes:
        key = frozenset(cls)
        for a in cls:
            of[a] = key
    rep = {frozenset(cls): cls[0] for cls in classes}
    for cls in classes:
        vals = {space.norm(a) for a in cls}
        if max(vals) - min(vals) > space.tol:
            raise PreconditionError(f"norm not constant on class {cls!r}")

    def proj(a):
        return of[a]

    q = CoverSpace(
        name=f"{space.name}/~",
        refines=lambda a, b: space.refines(rep[a], rep[b]),
        meet=lambda a, b: of[space.meet(rep[a], rep[b])],
        norm=lambda a: space.norm(rep[a]),
        unit=of[space.unit] if space.unit is not None else None,
        elements=tuple(frozenset(c) for c in classes),
        meet_space=space.meet_space,
        commutative=space.commutative,
        contains=lambda a: a in rep,
        tol=space.tol,
    )
    return q, SpaceMap(space, q, proj, "π~", declared_class=MapClass.HOMOMORPHISM)


def quotient_map(space: CoverSpace, quotient: CoverSpace, lam: SelfMap) -> SelfMap:
    """``[α] ↦ [λα]``; needs ``λ`` to send equivalent elements to equivalent ones."""
    of = {a: cls for cls in quotient.elements for a in cls}
    for cls in quotient.elements:
        images = {of[lam.apply(a)] for a in cls}
        if len(images) > 1:
            raise PreconditionError(f"{lam.name} does not respect ~ on {sorted(cls, key=repr)!r}")
    rep = {cls: next(iter(cls)) for cls in quotient.elements}
    return SelfMap(lambda c: of[lam.apply(rep[c])], lam.declared_class, f"{lam.name}/~", unital=lam.unital)


def is_antisymmetric(space: CoverSpace) -> Optional[tuple]:
    """``None`` if ``≺`` is antisymmetric on the enumeration, else a witness."""
    for a, b in itertools.combinations(space.elements, 2):
        if space.refines(a, b) and space.refines(b, a):
            return (a, b)
    return None


# -- coproducts and shifts --------------------------------------------------


@dataclass(frozen=True)
class FiniteSupportTuple:
    """Sparse tuple over ℕ or ℤ; unlisted indices carry the base unit."""

    kind: str
    entries: tuple = ()

    def __post_init__(self):
        if self.kind not in ("N", "Z"):
            raise ValueError(f"index kind must be 'N' or 'Z', got {self.kind!r}")
        idx = [i for i, _ in self.entries]
        if idx != sorted(set(idx)):
            raise ValueError("entries must have strictly increasing indices")
        if self.kind == "N" and idx and idx[0] < 0:
            raise ValueError("negative index in an ℕ-indexed tuple")

    @property
    def support(self) -> tuple:
        return tuple(i for i, _ in self.entries)

    def get(self, i: int, unit):
        for j, a in self.entries:
            if j == i:
                return a
        return unit

    def __repr__(self) -> str:
        body = ", ".join(f"{i}↦{a!r}" for i, a in self.entries)
        return f"({body})"


def make_tuple(kind: str, mapping: Mapping[int, Any], unit) -> FiniteSupportTuple:
    """Build a canonical tuple, dropping entries equal to the unit."""
    return FiniteSupportTuple(kind, tuple(sorted((i, a) for i, a in mapping.items() if a != unit)))


def coproduct_space(
    base: CoverSpace,
    kind: str = "N",
    support: Optional[Iterable[int]] = None,
) -> CoverSpace:
    """Finite-support tuples over a unital base.

    With ``support`` given the result is the finite subspace of tuples
    supported inside it (closed under meets), with an exhaustive enumeration.
    """
    if base.unit is None:
        raise PreconditionError(f"coproduct needs a unital base; {base.name!r} has no unit")
    u = base.unit
    sup = None if support is None else tuple(sorted(set(support)))

    def pairs(a, b):
        da, db = dict(a.entries), dict(b.entries)
        for i in sorted(set(da) | set(db)):
            yield i, da.get(i, u), db.get(i, u)

    def refines(a, b):
        return all(base.refines(x, y) for _, x, y in pairs(a, b))

    def meet(a, b):
        return make_tuple(kind, {i: base.meet(x, y) for i, x, y in pairs(a, b)}, u)

    def norm(a):
        total = 0.0
        for _, x in a.entries:
            total = ext_add(total, base.norm(x))
        return total

    def contains(a):
        if not isinstance(a, FiniteSupportTuple) or a.kind != kind:
            return False
        if sup is not None and not set(a.support) <= set(sup):
            return False
        return base.contains is None or all(base.contains(x) for _, x in a.entries)

    elements = None
    if sup is not None:
        if base.elements is None:
            raise PreconditionError("a finite support needs an enumerable base")
        elements = tuple(
            make_tuple(kind, dict(zip(sup, combo)), u)
            for combo in itertools.product(base.elements, repeat=len(sup))
        )
    cofinal = None
    bottom = minimum_element(base)
    if bottom is not None and sup is None:
        lo = (lambda k: 0) if kind == "N" else (lambda k: -k)
        cofinal = lambda k: make_tuple(kind, {i: bottom for i in range(lo(k), k + 1)}, u)  # noqa: E731
    label = base.name + ("^⊕ℕ" if kind == "N" else "^⊕ℤ")
    if sup is not None:
        label += f"|{list(sup)}"
    return CoverSpace(
        name=label,
        refines=refines,
        meet=meet,
        norm=norm,
        unit=FiniteSupportTuple(kind),
        elements=elements,
        cofinal_family=cofinal,
        meet_space=base.meet_space,
        commutative=base.commutative,
        contains=contains,
        tol=base.tol,
    )


def minimum_element(space: CoverSpace):
    """An element refining every element of a finite space, if one exists."""
    if space.elements is None:
        return None
    for a in space.elements:
        if all(space.refines(a, b) for b in space.elements):
            return a
    return None


def injection(base: CoverSpace, coproduct: CoverSpace, i: int, kind: str = "N") -> SpaceMap:
    u = base.unit
    return SpaceMap(
        base,
        coproduct,
        lambda a: make_tuple(kind, {i: a}, u),
        f"ι{i}",
        declared_class=MapClass.HOMOMORPHISM,
    )


def _require_unital(base: CoverSpace, lam: SelfMap) -> None:
    if base.unit is None:
        raise PreconditionError("base has no unit")
    if not base.equivalent(lam.apply(base.unit), base.unit):
        raise PreconditionError(f"{lam.name} is not unital")


def coproduct_map(base: CoverSpace, lam: SelfMap, kind: str = "N") -> SelfMap:
    """Componentwise map on tuples; its relative entropy is the sum over the
    support for lower maps."""
    _require_unital(base, lam)
    u = base.unit
    f, g = lam.apply, lam.inverse_apply

    def apply(a):
        return make_tuple(kind, {i: f(x) for i, x in a.entries}, u)

    closed = None
    if lam.closed_form is not None and lam.is_lower:

        def closed(a):
            vals = [lam.closed_form(x) for _, x in a.entries]
            if any(v is None for v in vals):
                return None
            total = 0.0
            for v in vals:
                total = ext_add(total, v)
            return total

    return SelfMap(
        apply=apply,
        declared_class=lam.declared_class,
        name=f"⊕{lam.name}",
        inverse_apply=(lambda a: make_tuple(kind, {i: g(x) for i, x in a.entries}, u)) if g is not None else None,
        closed_form=closed,
        unital=True,
    )


@dataclass(frozen=True)
class ShiftSystem:
    space: CoverSpace
    shift: SelfMap
    base: CoverSpace
    base_map: SelfMap
    kind: str

    def embed(self, alpha) -> FiniteSupportTuple:
        """``α ↦ ᾱ``: the tuple with ``α`` at index 0."""
        return make_tuple(self.kind, {0: alpha}, self.base.unit)

    def tuple(self, mapping: Mapping[int, Any]) -> FiniteSupportTuple:
        return make_tuple(self.kind, mapping, self.base.unit)


def shift_space_map(
    base: CoverSpace,
    kind: str = "N",
    base_map: Optional[SelfMap] = None,
    support: Optional[Iterable[int]] = None,
) -> ShiftSystem:
    """The shift ``(αᵢ) ↦ (λα_{i−1})`` on the coproduct over ℕ or ℤ.

    Over ℕ the new entry at index 0 is ``λ(unit) = unit``.  The closed form
    is offered for tuples with a single non-unit entry when ``λ`` preserves
    norms, where ``a_n = n·h(α)``.
    """
    from .core import identity_map

    lam = base_map if base_map is not None else identity_map()
    _require_unital(base, lam)
    if kind == "Z" and lam.inverse_apply is None:
        raise PreconditionError("a ℤ-shift needs an invertible base map")
    space = coproduct_space(base, kind, support)
    u = base.unit
    f, g = lam.apply, lam.inverse_apply

    def apply(a):
        return make_tuple(kind, {i + 1: f(x) for i, x in a.entries}, u)

    inverse = None
    if kind == "Z":
        inverse = lambda a: make_tuple(kind, {i - 1: g(x) for i, x in a.entries}, u)  # noqa: E731

    closed = None
    if implies(lam.declared_class, MapClass.HOMOMORPHISM):

        def closed(a):
            if len(a.entries) == 0:
                return 0.0
            if len(a.entries) == 1:
                return base.norm(a.entries[0][1])
            return None

    if kind == "Z":
        cls = lam.declared_class
    else:
        cls = meet_class([lam.declared_class, MapClass.HOMOMORPHISM])
    shift = SelfMap(apply, cls, f"s[{lam.name}]", inverse_apply=inverse, closed_form=closed, unital=True)
    return ShiftSystem(space, shift, base, lam, kind)


# -- finite direct limits ---------------------------------------------------


@dataclass
class DirectedSystem:
    """A finite directed family of spaces with coherent homomorphisms.

    ``phi[(i, j)]`` is given for every ``i ≤ j`` (including ``i == j``);
    ``leq`` lists the order pairs, reflexive pairs implied.
    """

    indices: tuple
    leq: frozenset
    spaces: dict
    phi: dict
    maps: dict

    def le(self, i, j) -> bool:
        return i == j or (i, j) in self.leq


@dataclass
class DirectLimit:
    space: CoverSpace
    map: SelfMap
    top: Hashable
    canonical: dict
    classes: dict = field(repr=False)


class DirectLimitError(ValueError):
    def __init__(self, what: str, witness: tuple):
        super().__init__(f"{what} fails: {witness!r}")
        self.what = what
        self.witness = witness


def direct_limit(system: DirectedSystem) -> DirectLimit:
    """Limit of a finite directed system, realised inside its top space.

    A finite directed poset has a maximum ``top``; every class ``[αᵢ]`` is
    stored as ``φ_{i,top} αᵢ`` and two representatives are ``≈`` iff their
    pushes to ``top`` coincide.
    """
    idx = tuple(system.indices)
    if not idx:
        raise ValueError("empty index set")
    tops = [t for t in idx if all(system.le(i, t) for i in idx)]
    if not tops:
        pair = next((i, j) for i, j in itertools.combinations(idx, 2) if not any(system.le(i, k) and system.le(j, k) for k in idx))
        raise DirectLimitError("directedness", pair)
    top = tops[0]
    for i in idx:
        sp = system.spaces[i]
        if sp.elements is None:
            raise PreconditionError(f"space at index {i!r} is not enumerable")
        for a in sp.elements:
            if system.phi[(i, i)](a) != a:
                raise DirectLimitError("identity φ_ii", (i, a))
    for i, j, k in itertools.product(idx, repeat=3):
        if system.le(i, j) and system.le(j, k):
            for a in system.spaces[i].elements:
                if system.phi[(j, k)](system.phi[(i, j)](a)) != system.phi[(i, k)](a):
                    raise DirectLimitError("coherence", (i, j, k, a))
    for i, j in itertools.product(idx, repeat=2):
        if system.le(i, j):
            for a in system.spaces[i].elements:
                lhs = system.phi[(i, j)](system.maps[i].apply(a))
                rhs = system.maps[j].apply(system.phi[(i, j)](a))
                if lhs != rhs:
                    raise DirectLimitError("compatibility", (i, j, a))

    T = system.spaces[top]
    classes: dict = {}
    for i in idx:
        for a in system.spaces[i].elements:
            classes.setdefault(system.phi[(i, top)](a), []).append((i, a))
    for rep, members in classes.items():
        norms = [system.spaces[i].norm(a) for i, a in members]
        if max(norms) - min(norms) > T.tol:
            raise DirectLimitError("norm well-definedness", (rep, members))
    carrier = tuple(c for c in T.elements if c in classes)
    members = frozenset(carrier)
    space = CoverSpace(
        name=f"lim[{','.join(s.name for s in system.spaces.values())}]",
        refines=T.refines,
        meet=T.meet,
        norm=T.norm,
        unit=T.unit,
        elements=carrier,
        meet_space=T.meet_space,
        commutative=T.commutative,
        contains=lambda a: a in members,
        tol=T.tol,
    )
    lam_top = system.maps[top]
    limit_map = SelfMap(
        apply=lam_top.apply,
        declared_class=meet_class(m.declared_class for m in system.maps.values()),
        name=f"lim {lam_top.name}",
        inverse_apply=lam_top.inverse_apply,
        unital=lam_top.unital,
    )
    canonical = {
        i: SpaceMap(system.spaces[i], space, system.phi[(i, top)], f"μ{i}", declared_class=MapClass.HOMOMORPHISM)
        for i in idx
    }
    return DirectLimit(space, limit_map, top, canonical, classes)
