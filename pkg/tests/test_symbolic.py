from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entropy_spaces import symbolic as sy
from entropy_spaces.axioms import check_cover_axioms, check_norm_axioms, classify_map
from entropy_spaces.core import MapClass, PreconditionError
from entropy_spaces.entropy import entropy_bilateral, entropy_relative

coords = st.sets(st.integers(-4, 4), max_size=6)
MATRICES = [((1, 1), (1, 0)), ((1, 1), (1, 1)), ((0, 1), (1, 0)), ((1, 1, 0), (0, 1, 1), (1, 0, 1))]


@given(coords, coords)
def test_meet_is_union(a, b):
    s, t = sy.from_coordinates(a), sy.from_coordinates(b)
    m = sy.normalize(s + t)
    assert set(sy.coordinates(m)) == a | b
    assert sy.contains_set(m, s) and sy.contains_set(m, t)
    assert sy.contains_set(s, t) == (b <= a)


@given(st.sampled_from(MATRICES), st.sets(st.integers(0, 6), min_size=1, max_size=5))
def test_pattern_count_matches_brute_force(A, c):
    sft = sy.Sft(len(A), A)
    assert sy.pattern_count(sft, sy.from_coordinates(c)) == sy.brute_force_count(sft, c)


def test_counts_are_exact_integers():
    g = sy.golden_mean()
    big = sy.count_words(g, 200)
    assert isinstance(big, int)
    a, b = 1, 2
    for _ in range(199):
        a, b = b, a + b
    assert big == b


def test_sft_validation():
    with pytest.raises(ValueError):
        sy.Sft(2, ((1, 1), (0, 0)))
    with pytest.raises(ValueError):
        sy.Sft(2, ((1, 2), (1, 1)))
    with pytest.raises(ValueError):
        sy.window(3, 1)


def test_perron_log():
    assert sy.perron_log(sy.golden_mean()) == pytest.approx(math.log((1 + 5 ** 0.5) / 2))
    assert sy.perron_log(sy.full_shift(5)) == pytest.approx(math.log(5))


def test_union_and_product_sft():
    u = sy.disjoint_union(sy.full_shift(2), sy.full_shift(3))
    assert sy.count_words(u, 4) == 2 ** 4 + 3 ** 4
    p = sy.product_sft(sy.full_shift(2), sy.golden_mean())
    assert sy.count_words(p, 5) == 2 ** 5 * sy.count_words(sy.golden_mean(), 5)


def test_space_axioms_on_finite_window():
    sft = sy.golden_mean()
    sp = sy.sft_space(sft)
    sample = sy.coordinate_sets_within(-1, 2)
    assert check_cover_axioms(sp, sample).ok
    assert check_norm_axioms(sp, sample).ok
    rep = classify_map(sp, sy.shift_preimage_map(sft), sample)
    assert rep.has(MapClass.HOMOMORPHISM)


def test_bilateral_full_shift():
    sft = sy.full_shift(2)
    est = entropy_bilateral(sy.sft_space(sft), sy.shift_preimage_map(sft), sy.window(0, 0), 6)
    assert est.lengths == [1, 3, 5, 7, 9, 11]
    assert est.quotients == pytest.approx([math.log(2)] * 6)


def test_forward_map_only_on_one_sided_full():
    with pytest.raises(PreconditionError):
        sy.shift_forward_map(sy.full_shift(2))
    with pytest.raises(PreconditionError):
        sy.shift_forward_map(sy.golden_mean(two_sided=False))
    sft = sy.full_shift(2, two_sided=False)
    f = sy.shift_forward_map(sft)
    assert f.apply(((0, 3),)) == ((0, 2),)
    assert f.apply(((0, 0), (2, 2))) == ((1, 1),)
    est = entropy_relative(sy.sft_space(sft), f, sy.window(2, 4), 8)
    assert est.exact == 0.0 and est.stabilized_at == 3


def test_one_sided_space_refuses_negative_coordinates():
    sp = sy.sft_space(sy.full_shift(2, two_sided=False))
    assert not sp.contains(((-1, 0),))
    assert sp.contains(((0, 1),))
    assert not sp.contains(((0, 1), (2, 3)))  # not canonical: adjacent intervals
