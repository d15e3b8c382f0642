from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_spaces.axioms import check_cover_axioms, check_norm_axioms, classify_space_map
from entropy_spaces.constructions import (
    UNIT,
    DirectedSystem,
    DirectLimitError,
    FiniteSupportTuple,
    adjoin_unit,
    coproduct_map,
    coproduct_space,
    direct_limit,
    extend_unital,
    f_product_space,
    injection,
    is_antisymmetric,
    make_tuple,
    product_space,
    projection,
    quotient_map,
    quotient_space,
    shift_space_map,
    validate_combiner,
)
from entropy_spaces.core import MapClass, PreconditionError, identity_map
from entropy_spaces.entropy import entropy_relative
from entropy_spaces.finite import explicit_map, fixture_f1, fixture_f4, random_set_family_space


def _pair(seed):
    rng = random.Random(seed)
    return random_set_family_space(rng, name="A"), random_set_family_space(rng, name="B")


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_product_and_projection(seed):
    A, B = _pair(seed)
    P = product_space([A, B])
    assert check_cover_axioms(P).ok and check_norm_axioms(P).ok
    for a in P.elements[:20]:
        assert P.norm(a) == pytest.approx(A.norm(a[0]) + B.norm(a[1]))
    assert classify_space_map(projection(P, A, 0)).has(MapClass.LOWER_MORPHISM)


def test_f_product_has_no_unit_and_logsumexp_norm():
    f1 = fixture_f1()
    F = f_product_space(f1, f1)
    assert F.unit is None
    assert F.norm(("top", "top")) == pytest.approx(math.log(2))
    assert F.norm(("x", "y")) == pytest.approx(math.log(5))
    assert check_norm_axioms(F).ok


def test_combiner_validation():
    assert validate_combiner(max) is None
    assert validate_combiner(lambda a, b: a + b) is None
    bad = validate_combiner(lambda a, b: (a + b) ** 2)
    assert bad is not None and bad[0] == "subadditive"
    assert validate_combiner(lambda a, b: max(0.0, 3.0 - a))[0] == "monotone"
    with pytest.raises(PreconditionError):
        f_product_space(fixture_f1(), fixture_f1(), f=lambda a, b: (a + b) ** 2)


def test_adjoin_unit():
    f4, lam = fixture_f4()
    U = adjoin_unit(f4)
    assert U.unit is UNIT and U.norm(UNIT) == 0.0
    assert U.refines(0, UNIT) and not U.refines(UNIT, 0)
    assert U.meet(UNIT, 1) == 1
    assert check_cover_axioms(U).ok and check_norm_axioms(U).ok
    ext = extend_unital(lam)
    assert ext.apply(UNIT) is UNIT and ext.apply(2) == 1


def test_tuples_are_canonical():
    assert make_tuple("N", {0: "a", 3: "u"}, "u") == FiniteSupportTuple("N", ((0, "a"),))
    with pytest.raises(ValueError):
        FiniteSupportTuple("N", ((-1, "a"),))
    with pytest.raises(ValueError):
        FiniteSupportTuple("Q")
    with pytest.raises(ValueError):
        FiniteSupportTuple("Z", ((2, "a"), (1, "b")))


def test_coproduct_needs_unit_and_sums_norms():
    f1 = fixture_f1()
    C = coproduct_space(f1, "N", support=[0, 1, 2])
    assert len(C.elements) == 4 ** 3
    t = make_tuple("N", {0: "x", 2: "y"}, "top")
    assert C.norm(t) == pytest.approx(math.log(6))
    assert check_cover_axioms(C).ok
    with pytest.raises(PreconditionError):
        coproduct_space(explicit_space_without_unit())
    inj = injection(f1, C, 1)
    assert inj.apply("x") == make_tuple("N", {1: "x"}, "top")


def explicit_space_without_unit():
    from dataclasses import replace

    return replace(fixture_f1(), unit=None)


def test_coproduct_map_additive():
    f1 = fixture_f1()
    lam = explicit_map(f1, {"top": "top", "x": "x", "y": "bot", "bot": "bot"}, MapClass.LOWER_MAP)
    C = coproduct_space(f1, "N", support=[0, 1])
    cl = coproduct_map(f1, lam)
    t = make_tuple("N", {0: "x", 1: "y"}, "top")
    whole = entropy_relative(C, cl, t, 6)
    parts = [entropy_relative(f1, lam, a, 6) for a in ("x", "y")]
    assert whole.a_seq == pytest.approx([x + y for x, y in zip(parts[0].a_seq, parts[1].a_seq)])


def test_shift_entropy_is_base_norm():
    f1 = fixture_f1()
    S = shift_space_map(f1, "N")
    est = entropy_relative(S.space, S.shift, S.embed("y"), 10)
    assert est.exact == pytest.approx(math.log(3))
    assert est.a_seq == pytest.approx([n * math.log(3) for n in range(1, 11)])
    with pytest.raises(PreconditionError):
        shift_space_map(f1, "Z", base_map=explicit_map(f1, {a: a for a in f1.elements}, MapClass.ISOMORPHISM))


def test_quotient_collapses_equivalents():
    f1 = fixture_f1()
    q, proj = quotient_space(f1)
    assert len(q.elements) == 4
    assert is_antisymmetric(q) is None
    assert classify_space_map(proj).has(MapClass.HOMOMORPHISM)
    lam = explicit_map(f1, {"top": "top", "x": "top", "y": "y", "bot": "y"}, MapClass.LOWER_MAP)
    ql = quotient_map(f1, q, lam)
    assert ql.apply(proj.apply("bot")) == proj.apply("y")


def test_direct_limit_rejects_incoherent_system():
    from entropy_spaces import alg

    G1, G2 = alg.FinAbGroup((2,)), alg.FinAbGroup((2, 2))
    W1, W2 = alg.weiss_space(G1), alg.weiss_space(G2)
    ident = lambda H: H  # noqa: E731
    swap = alg.Endomorphism(G2, ((0, 1), (1, 0)))
    system = DirectedSystem(
        indices=("a", "b"),
        leq=frozenset({("a", "b")}),
        spaces={"a": W1, "b": W2},
        phi={("a", "a"): ident, ("b", "b"): ident, ("a", "b"): lambda H: frozenset((x[0], 0) for x in H)},
        maps={"a": alg.weiss_map(alg.identity_endo(G1)), "b": alg.weiss_map(swap)},
    )
    with pytest.raises(DirectLimitError) as exc:
        direct_limit(system)
    assert exc.value.what == "compatibility"


def test_direct_limit_needs_upper_bound():
    f1 = fixture_f1()
    ident = lambda a: a  # noqa: E731
    system = DirectedSystem(
        indices=("a", "b"),
        leq=frozenset(),
        spaces={"a": f1, "b": f1},
        phi={("a", "a"): ident, ("b", "b"): ident},
        maps={"a": identity_map(), "b": identity_map()},
    )
    with pytest.raises(DirectLimitError) as exc:
        direct_limit(system)
    assert exc.value.what == "directedness"
