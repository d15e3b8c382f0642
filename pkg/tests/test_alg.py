from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_spaces import alg
from entropy_spaces.axioms import check_cover_axioms, check_norm_axioms, classify_map
from entropy_spaces.core import MapClass, PreconditionError
from entropy_spaces.entropy import entropy

GROUPS = [(2,), (4,), (5,), (2, 2), (2, 4), (2, 2, 2), (3, 9), (6,)]
# subgroup counts of small abelian groups, known in closed form
KNOWN = {(2,): 2, (4,): 3, (5,): 2, (2, 2): 5, (2, 4): 8, (2, 2, 2): 16, (3, 9): 10, (6,): 4}


@pytest.mark.parametrize("factors", GROUPS)
def test_subgroup_enumeration(factors):
    G = alg.FinAbGroup(factors)
    subs = alg.enumerate_subgroups(G)
    assert len(subs) == len(set(subs)) == KNOWN[factors]
    if G.order <= 16:
        assert set(subs) == set(alg.brute_force_subgroups(G))
    assert all(alg.is_subgroup(G, S) for S in subs)


def test_group_validation():
    with pytest.raises(alg.GroupError):
        alg.FinAbGroup((1,))
    with pytest.raises(alg.GroupError):
        alg.FinAbGroup((2,) * 13)
    G = alg.FinAbGroup((2, 4))
    with pytest.raises(alg.GroupError):
        alg.Endomorphism(G, ((1, 0), (1, 1)))  # Z2 -> Z4 sending 1 to 1 is not well defined
    alg.Endomorphism(G, ((1, 1), (2, 1)))
    assert repr(G) == "Z2⊕Z4"


@settings(max_examples=30)
@given(st.sampled_from([(2, 2), (2, 4), (3, 3)]), st.data())
def test_endomorphism_is_homomorphism(factors, data):
    G = alg.FinAbGroup(factors)
    d = G.factors
    M = tuple(
        tuple(data.draw(st.integers(0, d[i] - 1)) * (d[i] // math.gcd(d[i], d[j])) % d[i] for j in range(2))
        for i in range(2)
    )
    phi = alg.Endomorphism(G, M)
    for x in G.elements():
        for y in G.elements()[:6]:
            assert phi(G.add(x, y)) == G.add(phi(x), phi(y))
    for S in alg.enumerate_subgroups(G):
        assert alg.is_subgroup(G, phi.image(S))
        assert alg.is_subgroup(G, phi.preimage(S))


@pytest.mark.parametrize("factors", [(4,), (2, 2), (2, 4)])
def test_weiss_and_adjoint_axioms(factors):
    G = alg.FinAbGroup(factors)
    for sp in (alg.weiss_space(G), alg.adjoint_space(G)):
        assert check_cover_axioms(sp).ok
        assert check_norm_axioms(sp).ok


def test_weiss_map_classes_and_entropy():
    G = alg.FinAbGroup((2, 4))
    phi = alg.Endomorphism(G, ((1, 0), (2, 1)))
    W = alg.weiss_space(G)
    assert classify_map(W, alg.weiss_map(phi)).has(MapClass.LOWER_MORPHISM)
    assert classify_map(alg.adjoint_space(G), alg.adjoint_map(phi)).has(MapClass.LOWER_MORPHISM)
    h = entropy(W, alg.weiss_map(phi), list(W.elements), 12)
    assert h.value == 0.0 and h.exact


def test_backward_map_needs_injective():
    G = alg.cyclic(4)
    with pytest.raises(PreconditionError):
        alg.backward_weiss_map(alg.scalar_endo(G, 2))
    lam = alg.backward_weiss_map(alg.scalar_endo(G, 3))
    assert classify_map(alg.weiss_space(G), lam).has(MapClass.LOWER_MAP)


def test_generator_depth():
    G = alg.FinAbGroup((2, 2))
    shift = alg.Endomorphism(G, ((0, 1), (1, 0)))
    e1 = alg.generated(G, [(1, 0)])
    assert alg.algebraic_generator_depth(G, shift, e1) == 1
    assert alg.algebraic_generator_depth(G, alg.identity_endo(G), e1) is None
    assert alg.expansivity_sum(G, shift, e1, 1) == G.whole


def test_bernoulli_closed_form():
    B = alg.bernoulli_weiss_shift(alg.cyclic(3))
    from entropy_spaces.entropy import entropy_relative

    est = entropy_relative(B.space, B.shift, B.generator, 6)
    assert est.exact == pytest.approx(math.log(3))
    assert est.a_seq == pytest.approx([n * math.log(3) for n in range(1, 7)])
    assert len(B.targets(range(2))) == 3 ** 2
