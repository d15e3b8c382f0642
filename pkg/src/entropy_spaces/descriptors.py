"""JSON system descriptors.

A descriptor is a JSON object::

    {"schema": 1, "name": "...", "kind": "<kind>", "space": {...},
     "map": {...}, "analysis": {...}}

with ``kind`` one of ``finite_explicit``, ``topo``, ``group_weiss``,
``group_adjoint``, ``sft`` or ``construction``.  Norm values are numbers,
rational strings such as ``"3/2"``, ``"inf"`` or ``{"log": n}``.  The
per-kind bodies and cover encodings are listed in the README.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Optional

from . import alg, symbolic, topo
from .constructions import (
    adjoin_unit,
    coproduct_map,
    coproduct_space,
    extend_unital,
    f_product_map,
    f_product_space,
    make_tuple,
    product_map,
    product_space,
    shift_space_map,
)
from .core import CoverSpace, MapClass, PreconditionError, SelfMap, identity_map, power_map
from .finite import explicit_map, explicit_space

SCHEMA_VERSION = 1
KINDS = ("finite_explicit", "topo", "group_weiss", "group_adjoint", "sft", "construction")


class DescriptorError(ValueError):
    """Schema or parse error; ``where`` is a dotted path or a line number."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class System:
    name: str
    kind: str
    space: CoverSpace
    map: SelfMap
    decode: Callable[[Any], Any] = field(repr=False)
    encode: Callable[[Any], str] = field(repr=False)
    covers: list = field(default_factory=list, repr=False)
    analysis: dict = field(default_factory=dict)
    parts: dict = field(default_factory=dict, repr=False)


def parse_norm(v, where: str) -> float:
    if isinstance(v, bool):
        raise DescriptorError(where, "norm must be a number, rational string, 'inf' or {'log': n}")
    if isinstance(v, (int, float)):
        x = float(v)
    elif isinstance(v, str):
        if v.strip() in ("inf", "∞"):
            return math.inf
        try:
            x = float(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError):
            raise DescriptorError(where, f"bad rational {v!r}") from None
    elif isinstance(v, dict) and set(v) == {"log"}:
        n = v["log"]
        if isinstance(n, bool) or not isinstance(n, (int, str)):
            raise DescriptorError(where, "log argument must be an integer or rational string")
        try:
            q = Fraction(n)
        except (ValueError, ZeroDivisionError):
            raise DescriptorError(where, f"bad log argument {n!r}") from None
        if q < 1:
            raise DescriptorError(where, "log argument must be >= 1")
        x = math.log(q.numerator) - math.log(q.denominator)
    else:
        raise DescriptorError(where, "norm must be a number, rational string, 'inf' or {'log': n}")
    if x < 0 or math.isnan(x):
        raise DescriptorError(where, "norm must be nonnegative")
    return x


def _get(d: dict, key: str, where: str, typ=None, default=...):
    if key not in d:
        if default is ...:
            raise DescriptorError(f"{where}.{key}", "missing")
        return default
    v = d[key]
    bad_type = typ is not None and not isinstance(v, typ)
    if bad_type or (typ is int and isinstance(v, bool)):
        raise DescriptorError(f"{where}.{key}", f"expected {getattr(typ, '__name__', typ)}")
    return v


def _class(name: Optional[str], where: str, default: MapClass) -> MapClass:
    if name is None:
        return default
    try:
        return MapClass(name)
    except ValueError:
        raise DescriptorError(where, f"unknown map class {name!r}") from None


# -- per-kind builders ------------------------------------------------------


def _finite(d: dict) -> System:
    sp = _get(d, "space", "space", dict)
    elems = _get(sp, "elements", "space", list)
    if not elems or not all(isinstance(e, str) for e in elems):
        raise DescriptorError("space.elements", "expected a nonempty list of names")
    names = set(elems)
    rel = [tuple(p) for p in _get(sp, "refines", "space", list)]
    for i, p in enumerate(rel):
        if len(p) != 2 or not set(p) <= names:
            raise DescriptorError(f"space.refines[{i}]", "expected a pair of element names")
    meet = {}
    for i, row in enumerate(_get(sp, "meet", "space", list)):
        if len(row) != 3 or not set(row) <= names:
            raise DescriptorError(f"space.meet[{i}]", "expected [a, b, a∧b] with element names")
        meet[(row[0], row[1])] = row[2]
    if sp.get("commutative"):
        for (a, b), c in list(meet.items()):
            meet.setdefault((b, a), c)
    missing = [(a, b) for a in elems for b in elems if (a, b) not in meet]
    if missing:
        raise DescriptorError("space.meet", f"no entry for {missing[0]}")
    norms_raw = _get(sp, "norms", "space", dict)
    norms = {}
    for e in elems:
        if e not in norms_raw:
            raise DescriptorError(f"space.norms.{e}", "missing")
        norms[e] = parse_norm(norms_raw[e], f"space.norms.{e}")
    unit = sp.get("unit")
    if unit is not None and unit not in names:
        raise DescriptorError("space.unit", f"unknown element {unit!r}")
    space = explicit_space(
        d.get("name", "finite"),
        elems,
        rel,
        meet,
        norms,
        unit=unit,
        meet_space=bool(sp.get("meet_space", False)),
        commutative=bool(sp.get("commutative", False)),
        close=bool(sp.get("close", True)),
    )
    mp = _get(d, "map", "map", dict)
    table = _get(mp, "table", "map", dict)
    if set(table) != names or not set(table.values()) <= names:
        raise DescriptorError("map.table", "must map every element to an element")
    inverse = mp.get("inverse")
    if inverse is not None and (set(inverse) != names or not set(inverse.values()) <= names):
        raise DescriptorError("map.inverse", "must map every element to an element")
    lam = explicit_map(space, table, _class(mp.get("class"), "map.class", MapClass.LOWER_MAP), mp.get("name", "λ"), inverse)

    def decode(c):
        if c not in names:
            raise DescriptorError("cover", f"unknown element {c!r}")
        return c

    return System(d.get("name", "finite"), "finite_explicit", space, lam, decode, str, list(elems))


def _topology(sp: dict) -> topo.FiniteTopology:
    n = _get(sp, "points", "space", int)
    opens = _get(sp, "opens", "space", list)
    sets = set()
    for i, o in enumerate(opens):
        if not isinstance(o, list) or any(isinstance(p, bool) or not isinstance(p, int) or not 0 <= p < n for p in o):
            raise DescriptorError(f"space.opens[{i}]", f"expected a list of points in 0..{n - 1}")
        sets.add(topo.bits(o))
    sets |= {0, (1 << n) - 1}
    chk = topo.validate_topology(n, sets)
    if not chk.valid:
        raise DescriptorError("space.opens", f"{chk.reason}: {[topo.fmt_set(m) for m in chk.witness]}")
    return topo.FiniteTopology(n, frozenset(sets))


def _topo(d: dict, budget: Optional[int]) -> System:
    sp = _get(d, "space", "space", dict)
    top = _topology(sp)
    norm = sp.get("norm", "H")
    if norm not in ("H", "D"):
        raise DescriptorError("space.norm", "expected 'H' or 'D'")
    space = topo.topo_entropy_space(top, norm, budget)
    mp = _get(d, "map", "map", dict)
    pts = _get(mp, "points", "map", list)
    if len(pts) != top.n or any(isinstance(p, bool) or not isinstance(p, int) or not 0 <= p < top.n for p in pts):
        raise DescriptorError("map.points", f"expected {top.n} point images in 0..{top.n - 1}")
    T = topo.ContinuousSelfMap(top, tuple(pts))
    direction = mp.get("direction", "preimage")
    try:
        if direction == "preimage":
            lam = topo.preimage_map(T)
        elif direction == "forward":
            lam = topo.forward_map(T)
        else:
            raise DescriptorError("map.direction", "expected 'preimage' or 'forward'")
    except PreconditionError as e:
        raise DescriptorError("map", str(e)) from None

    def decode(c):
        if not isinstance(c, list):
            raise DescriptorError("cover", "expected a list of open sets")
        fam = [topo.bits(o) for o in c]
        if not topo.is_cover(top, fam):
            raise DescriptorError("cover", f"{c!r} is not an open cover")
        return topo.canonical(fam)

    def encode(c):
        return "{" + ", ".join(topo.fmt_set(m) for m in sorted(c)) + "}"

    return System(d.get("name", "topo"), "topo", space, lam, decode, encode, list(space.elements),
                  parts={"topology": top, "T": T})


def _group(sp: dict) -> alg.FinAbGroup:
    factors = _get(sp, "factors", "space", list)
    try:
        return alg.FinAbGroup(tuple(factors))
    except (alg.GroupError, TypeError, ValueError) as e:
        raise DescriptorError("space.factors", str(e)) from None


def _endo(G: alg.FinAbGroup, mp: dict) -> alg.Endomorphism:
    M = mp.get("matrix")
    if M is None:
        M = [[int(i == j) * mp.get("scalar", 1) for j in range(G.rank)] for i in range(G.rank)]
    try:
        return alg.Endomorphism(G, tuple(tuple(r) for r in M))
    except (alg.GroupError, TypeError, ValueError) as e:
        raise DescriptorError("map.matrix", str(e)) from None


def _subgroup_codec(G: alg.FinAbGroup):
    def decode(c):
        if c == "whole":
            return G.whole
        if c == "trivial":
            return G.trivial
        if not isinstance(c, list):
            raise DescriptorError("cover", "expected 'whole', 'trivial' or a list of generators")
        gens = [tuple(g) if isinstance(g, list) else (g,) for g in c]
        if any(len(g) != G.rank for g in gens):
            raise DescriptorError("cover", f"generators must have {G.rank} coordinates")
        return alg.generated(G, gens)

    def encode(H):
        return "⟨" + ", ".join("(" + ",".join(map(str, x)) + ")" for x in sorted(H)) + "⟩"

    return decode, encode


def _group_system(d: dict, kind: str) -> System:
    sp = _get(d, "space", "space", dict)
    G = _group(sp)
    mp = _get(d, "map", "map", dict)
    phi = _endo(G, mp)
    if kind == "group_weiss":
        space = alg.weiss_space(G)
        direction = mp.get("direction", "image")
        if direction == "image":
            lam = alg.weiss_map(phi)
        elif direction == "backward":
            if not phi.injective:
                raise DescriptorError("map", "backward map needs an injective endomorphism")
            lam = alg.backward_weiss_map(phi)
        else:
            raise DescriptorError("map.direction", "expected 'image' or 'backward'")
    else:
        space, lam = alg.adjoint_space(G), alg.adjoint_map(phi)
    dec, enc = _subgroup_codec(G)
    return System(d.get("name", kind), kind, space, lam, dec, enc, list(space.elements), parts={"group": G, "phi": phi})


def _sft_obj(sp: dict) -> symbolic.Sft:
    k = _get(sp, "alphabet", "space", int)
    A = sp.get("matrix")
    two = bool(sp.get("two_sided", True))
    try:
        if A is None:
            return symbolic.full_shift(k, two)
        return symbolic.Sft(k, tuple(tuple(r) for r in A), two, sp.get("label", "sft"))
    except (ValueError, TypeError) as e:
        raise DescriptorError("space", str(e)) from None


def _sft_codec():
    def decode(c):
        if not isinstance(c, list):
            raise DescriptorError("cover", "expected [] or [lo, hi] or a list of intervals")
        if not c:
            return symbolic.TRIVIAL
        if all(isinstance(x, int) and not isinstance(x, bool) for x in c):
            if len(c) != 2 or c[0] > c[1]:
                raise DescriptorError("cover", f"bad window {c!r}")
            return symbolic.window(c[0], c[1])
        try:
            return symbolic.normalize(tuple(iv) for iv in c)
        except (TypeError, ValueError) as e:
            raise DescriptorError("cover", str(e)) from None

    def encode(s):
        if not s:
            return "trivial"
        return "∪".join(f"[{lo},{hi}]" for lo, hi in s)

    return decode, encode


def _sft(d: dict) -> System:
    sp = _get(d, "space", "space", dict)
    sft = _sft_obj(sp)
    norm = sp.get("norm", "H")
    if norm not in ("H", "D"):
        raise DescriptorError("space.norm", "expected 'H' or 'D'")
    space = symbolic.sft_space(sft, norm)
    mp = d.get("map", {})
    direction = mp.get("direction", "preimage")
    try:
        if direction == "preimage":
            lam = symbolic.shift_preimage_map(sft)
        elif direction == "forward":
            lam = symbolic.shift_forward_map(sft)
        else:
            raise DescriptorError("map.direction", "expected 'preimage' or 'forward'")
    except PreconditionError as e:
        raise DescriptorError("map", str(e)) from None
    power = mp.get("power", 1)
    if isinstance(power, bool) or not isinstance(power, int):
        raise DescriptorError("map.power", "expected an integer")
    if power != 1:
        try:
            lam = power_map(lam, power)
        except (ValueError, symbolic.PreconditionError) as e:
            raise DescriptorError("map.power", str(e)) from None
    dec, enc = _sft_codec()
    lo = -2 if sft.two_sided else 0
    covers = symbolic.windows_within(lo, 2)
    return System(d.get("name", sft.name), "sft", space, lam, dec, enc, covers, parts={"sft": sft})


def _construction(d: dict, budget: Optional[int]) -> System:
    sp = _get(d, "space", "space", dict)
    op = _get(sp, "op", "space", str)
    name = d.get("name", op)
    if op == "bernoulli":
        H = _group(sp)
        B = alg.bernoulli_weiss_shift(H)
        dec_h, enc_h = _subgroup_codec(H)
        support = sp.get("support", [0, 1])
        decode, encode = _tuple_codec(B.system.base, "N", dec_h, enc_h)
        targets = B.targets(support)
        return System(name, "construction", B.space, B.shift, decode, encode, targets,
                      parts={"op": op, "bernoulli": B, "generator": B.generator, "shift_system": B.system})
    comps = _get(sp, "components", "space", list)
    subs = [load_descriptor(c, budget=budget, where=f"space.components[{i}]") for i, c in enumerate(comps)]
    if op in ("product", "f_product"):
        if op == "f_product" and len(subs) != 2:
            raise DescriptorError("space.components", "an f-product takes exactly two components")
        if not subs:
            raise DescriptorError("space.components", "need at least one component")
        spaces = [s.space for s in subs]
        maps = [s.map for s in subs]
        if op == "product":
            space, lam = product_space(spaces), product_map(spaces, maps)
        else:
            space, lam = f_product_space(*spaces), f_product_map(*maps)

        def decode(c):
            if not isinstance(c, list) or len(c) != len(subs):
                raise DescriptorError("cover", f"expected a list of {len(subs)} component covers")
            return tuple(s.decode(x) for s, x in zip(subs, c))

        def encode(c):
            return "(" + ", ".join(s.encode(x) for s, x in zip(subs, c)) + ")"

        covers = [tuple(c) for c in _zip_covers([s.covers for s in subs])]
        return System(name, "construction", space, lam, decode, encode, covers,
                      parts={"op": op, "components": subs})
    if op in ("coproduct", "shift"):
        if len(subs) != 1:
            raise DescriptorError("space.components", f"a {op} takes one component")
        (sub,) = subs
        base, lam0 = sub.space, sub.map
        if base.unit is None or sp.get("adjoin_unit", False):
            base, lam0 = adjoin_unit(base), extend_unital(lam0)
        kind = sp.get("index", "N")
        if kind not in ("N", "Z"):
            raise DescriptorError("space.index", "expected 'N' or 'Z'")
        support = sp.get("support")
        try:
            if op == "coproduct":
                space, lam = coproduct_space(base, kind, support), coproduct_map(base, lam0, kind)
                system = None
            else:
                bm = lam0 if sp.get("base_map", "component") == "component" else identity_map()
                system = shift_space_map(base, kind, bm, support)
                space, lam = system.space, system.shift
        except PreconditionError as e:
            raise DescriptorError("space", str(e)) from None
        decode, encode = _tuple_codec(base, kind, sub.decode, sub.encode)
        covers = [make_tuple(kind, {0: a}, base.unit) for a in sub.covers]
        if space.elements is not None:
            covers = list(space.elements)
        return System(name, "construction", space, lam, decode, encode, covers,
                      parts={"op": op, "components": subs, "base": base, "base_map": lam0, "shift_system": system})
    raise DescriptorError("space.op", f"unknown construction {op!r}")


def _zip_covers(lists):
    n = min(len(x) for x in lists)
    return [[x[i] for x in lists] for i in range(n)]


def _tuple_codec(base: CoverSpace, kind: str, dec, enc):
    def decode(c):
        if not isinstance(c, dict):
            raise DescriptorError("cover", "expected an object mapping indices to component covers")
        try:
            mapping = {int(i): dec(x) for i, x in c.items()}
        except ValueError:
            raise DescriptorError("cover", "indices must be integers") from None
        return make_tuple(kind, mapping, base.unit)

    def encode(t):
        return "(" + ", ".join(f"{i}↦{enc(a) if a is not base.unit else '1'}" for i, a in t.entries) + ")"

    return decode, encode


# -- entry points -----------------------------------------------------------


def load_descriptor(d: Any, tolerance: Optional[float] = None, budget: Optional[int] = None, where: str = "") -> System:
    """Build a :class:`System` from a parsed descriptor."""
    prefix = (where + ".") if where else ""
    if not isinstance(d, dict):
        raise DescriptorError(where or "document", "expected a JSON object")
    if not where:
        schema = d.get("schema")
        if schema != SCHEMA_VERSION:
            raise DescriptorError("schema", f"expected {SCHEMA_VERSION}, got {schema!r}")
    kind = d.get("kind")
    if kind not in KINDS:
        raise DescriptorError(prefix + "kind", f"expected one of {', '.join(KINDS)}")
    try:
        if kind == "finite_explicit":
            sysm = _finite(d)
        elif kind == "topo":
            sysm = _topo(d, budget)
        elif kind in ("group_weiss", "group_adjoint"):
            sysm = _group_system(d, kind)
        elif kind == "sft":
            sysm = _sft(d)
        else:
            sysm = _construction(d, budget)
    except DescriptorError as e:
        if where:
            raise DescriptorError(prefix + e.where, str(e).split(": ", 1)[-1]) from None
        raise
    analysis = d.get("analysis", {})
    if not isinstance(analysis, dict):
        raise DescriptorError(prefix + "analysis", "expected an object")
    sysm.analysis = analysis
    if tolerance is not None:
        sysm.space = replace(sysm.space, tol=tolerance)
    return sysm


def load_text(text: str, **kw) -> System:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorError(f"line {e.lineno}, column {e.colno}", e.msg) from None
    return load_descriptor(d, **kw)


def load_file(path: str, **kw) -> System:
    with open(path, encoding="utf-8") as fh:
        return load_text(fh.read(), **kw)


def decode_covers(sysm: System, raw, key: str = "covers") -> list:
    """Covers named in the analysis, or the system's default list."""
    if raw is None:
        return list(sysm.covers)
    if not isinstance(raw, list):
        raise DescriptorError(f"analysis.{key}", "expected a list of covers")
    out = []
    for i, c in enumerate(raw):
        try:
            out.append(sysm.decode(c))
        except DescriptorError as e:
            raise DescriptorError(f"analysis.{key}[{i}]", str(e).split(": ", 1)[-1]) from None
    return out
