from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_spaces.axioms import check_cover_axioms, check_norm_axioms, classify_map, verify_declared_class
from entropy_spaces.core import (
    Budget,
    BudgetExceeded,
    MapClass,
    PreconditionError,
    classes_from_axioms,
    identity_map,
    implies,
    meet_class,
    power_map,
)
from entropy_spaces.core import Axiom as A
from entropy_spaces.finite import (
    explicit_map,
    fixture_f1,
    fixture_f2,
    fixture_f3,
    fixture_f4,
    random_set_family_space,
    set_family_space,
    transitive_closure,
)


def test_class_lattice():
    assert implies(MapClass.ISOMORPHISM, MapClass.LOWER_MAP)
    assert implies(MapClass.HOMOMORPHISM, MapClass.UPPER_MORPHISM)
    assert implies(MapClass.MORPHISM, MapClass.MONOTONE)
    assert not implies(MapClass.LOWER_MAP, MapClass.MORPHISM)
    assert meet_class([MapClass.LOWER_MORPHISM, MapClass.UPPER_MORPHISM]) is MapClass.MORPHISM
    assert meet_class([MapClass.LOWER_MAP, MapClass.UPPER_MAP]) is MapClass.MONOTONE
    assert MapClass.MORPHISM in classes_from_axioms({A.MONOTONE, A.L1, A.U1})


def test_budget():
    b = Budget(3, "t")
    b.step(3)
    with pytest.raises(BudgetExceeded):
        b.step()
    Budget(None).step(10 ** 9)


def test_fixtures_f1_valid_f2_f3_broken():
    f1 = fixture_f1()
    assert check_cover_axioms(f1).ok and check_norm_axioms(f1).ok
    f2 = check_cover_axioms(fixture_f2())
    assert not f2.ok
    assert f2["C1"].witness == ("x", "y", "bot")
    f3 = check_norm_axioms(fixture_f3())
    assert not f3["H1"].passed
    assert check_cover_axioms(fixture_f3()).ok


def test_f4_morphism_declared_and_verified():
    space, lam = fixture_f4()
    rep = classify_map(space, lam)
    assert rep.has(MapClass.MORPHISM)
    assert verify_declared_class(space, lam)


def test_verify_declared_class_catches_false_declaration():
    f1 = fixture_f1()
    # a constant map is not injective, so the declared class is a lie
    lam = explicit_map(f1, {"top": "bot", "x": "bot", "y": "bot", "bot": "bot"}, MapClass.ISOMORPHISM)
    assert not verify_declared_class(f1, lam)


def test_identity_and_powers():
    f1 = fixture_f1()
    assert classify_map(f1, identity_map()).has(MapClass.ISOMORPHISM)
    lam = explicit_map(f1, {"top": "top", "x": "top", "y": "y", "bot": "y"}, MapClass.LOWER_MAP)
    l2 = power_map(lam, 2)
    assert [l2.apply(a) for a in ("top", "x", "y", "bot")] == ["top", "top", "y", "y"]
    assert power_map(lam, 0).apply("bot") == "bot"
    with pytest.raises(ValueError):
        power_map(lam, -1)


def _brute_closure(elems, pairs):
    rel = set(pairs) | {(a, a) for a in elems}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return rel


@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=10))
def test_transitive_closure_matches_fixpoint(pairs):
    elems = range(5)
    assert transitive_closure(elems, pairs) == _brute_closure(elems, pairs)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_random_set_families_are_entropy_spaces(seed):
    space = random_set_family_space(random.Random(seed))
    assert check_cover_axioms(space).ok
    assert check_norm_axioms(space).ok


def test_set_family_requires_union_closure():
    with pytest.raises(ValueError):
        set_family_space("bad", [frozenset(), frozenset({0}), frozenset({1})], {0: 1, 1: 1})
    s = set_family_space("ok", [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})], {0: 1, 1: 2})
    assert s.norm(frozenset({0, 1})) == 3.0
    assert s.meet(frozenset({0}), frozenset({1})) == frozenset({0, 1})


def test_explicit_map_must_be_total():
    with pytest.raises(ValueError):
        explicit_map(fixture_f1(), {"top": "top"}, MapClass.MONOTONE)


def test_classify_reports_entropy_norm_bounds():
    f1 = fixture_f1()
    assert f1.norm("bot") == pytest.approx(math.log(6))
    assert f1.equivalent("x", "x")
    with pytest.raises((PreconditionError, ValueError, KeyError)):
        f1.check_member("nope")
