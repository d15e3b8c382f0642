from __future__ import annotations

import math

import pytest

from entropy_spaces import symbolic as sy
from entropy_spaces.constructions import (
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
from entropy_spaces.core import MapClass, PreconditionError, SpaceMap
from entropy_spaces.connections import Connection
from entropy_spaces.finite import explicit_map, fixture_f1
from entropy_spaces.laws import (
    comparison_law,
    coproduct_additivity,
    f_product_law,
    log_law,
    product_additivity,
    shift_law,
)

LOWER = {"top": "top", "x": "top", "y": "y", "bot": "y"}


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_power_law_golden_mean(m):
    g = sy.golden_mean()
    res = log_law(sy.sft_space(g), sy.shift_preimage_map(g), sy.window(0, 0), m, 10)
    assert res.holds, res.witness


def test_power_law_preconditions():
    f1 = fixture_f1()
    with pytest.raises(PreconditionError):
        log_law(f1, explicit_map(f1, LOWER, MapClass.MONOTONE), "x", 2, 4)
    with pytest.raises(ValueError):
        log_law(f1, explicit_map(f1, LOWER, MapClass.LOWER_MAP), "x", -1, 4)


def test_product_and_f_product_laws():
    s2, g = sy.full_shift(2), sy.golden_mean()
    spaces = [sy.sft_space(s2), sy.sft_space(g)]
    maps = [sy.shift_preimage_map(s2), sy.shift_preimage_map(g)]
    alpha = (sy.window(0, 0), sy.window(0, 0))
    assert product_additivity(product_space(spaces), product_map(spaces, maps), spaces, maps, alpha, 12).holds
    F = f_product_space(*spaces)
    res = f_product_law(F, f_product_map(*maps), spaces, maps, alpha, 20)
    assert res.holds and res.detail["gap_at_horizon"] > 0


def test_coproduct_and_shift_laws():
    f1 = fixture_f1()
    lam = explicit_map(f1, {"top": "top", "x": "x", "y": "bot", "bot": "bot"}, MapClass.LOWER_MAP)
    C = coproduct_space(f1, "N", support=[0, 1, 2])
    t = make_tuple("N", {0: "x", 2: "y"}, "top")
    assert coproduct_additivity(C, coproduct_map(f1, lam), f1, lam, t, 8).holds
    S = shift_space_map(adjoin_unit(f1), "N", extend_unital(lam))
    res = shift_law(S, "y", 8)
    assert res.holds and res.detail["base_norm"] == pytest.approx(math.log(3))


def test_comparison_law_verdicts():
    f1 = fixture_f1()
    lam = explicit_map(f1, LOWER, MapClass.LOWER_MAP)
    ident = SpaceMap(f1, f1, lambda a: a, "id", inverse_apply=lambda a: a)
    good = comparison_law(Connection(ident, lam, lam), list(f1.elements), 6)
    assert good.holds and good.detail["verdict"] == "="
    # into a map that sends everything to the finest cover: only the upper law is licensed
    fine = explicit_map(f1, {a: "bot" for a in f1.elements}, MapClass.MONOTONE)
    up = comparison_law(Connection(ident, lam, fine), list(f1.elements), 6)
    assert up.detail["classes"] == ["upper_connection"] and up.detail["verdict"] == "<="
    assert up.holds
