"""Group arithmetic and sparse measures against naive oracles."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import skewpress as sp
import bruteforce as bf

# letters of F2 as plain ints, inverse = negation
_F2_LETTERS = st.sampled_from([1, -1, 2, -2])
_F2_WORDS = st.lists(_F2_LETTERS, max_size=10).map(tuple)


# ---------------------------------------------------------------------------
# free group


def _free_elem(G, letters):
    # arbitrary letter strings may be unreduced; build by letter products
    return G.product((x,) for x in letters)


@given(_F2_WORDS, _F2_WORDS)
def test_free_mul_matches_naive_reduction(u, v):
    G = sp.FreeGroup(2)
    got = G.mul(_free_elem(G, u), _free_elem(G, v))
    assert got == bf.free_mul(bf.free_reduce(u), bf.free_reduce(v))


@given(_F2_WORDS)
def test_free_inverse_cancels(u):
    G = sp.FreeGroup(2)
    g = _free_elem(G, u)
    assert G.inv(g) == bf.free_inv(bf.free_reduce(u))
    assert G.mul(g, G.inv(g)) == G.identity()
    assert G.mul(G.inv(g), g) == G.identity()


@given(_F2_WORDS, _F2_WORDS, _F2_WORDS)
def test_free_associativity(u, v, w):
    G = sp.FreeGroup(2)
    g, h, k = (_free_elem(G, x) for x in (u, v, w))
    assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))


def test_free_check_rejects_unreduced():
    G = sp.FreeGroup(2)
    with pytest.raises(sp.InputError):
        G.check((1, -1))
    with pytest.raises(sp.InputError):
        G.check((0,))
    with pytest.raises(sp.InputError):
        G.check((3,))


def test_free_sphere_and_ball_sizes():
    G = sp.FreeGroup(2)
    # spheres 1, 4, 12, 36, ...
    assert [G.sphere_size(r) for r in range(4)] == [1, 4, 12, 36]
    assert len(G.ball(2)) == 1 + 4 + 12
    assert len(set(G.ball(3))) == 1 + 4 + 12 + 36


# ---------------------------------------------------------------------------
# finite and abelian groups

_S3 = sp.symmetric_group_3()
_Z6 = sp.cyclic_group(6)


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_s3_axioms(a, b, c):
    G = _S3
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.identity()) == a
    assert G.mul(a, G.inv(a)) == G.identity()


@given(st.integers(0, 5), st.integers(0, 5))
def test_z6_commutes(a, b):
    assert _Z6.mul(a, b) == _Z6.mul(b, a) == (a + b) % 6


def test_cayley_table_validation():
    with pytest.raises(sp.InputError):
        sp.FiniteGroup([[0, 1], [0, 1]])  # column 0 is not a permutation
    with pytest.raises(sp.InputError):
        sp.FiniteGroup([[1, 0, 2], [0, 2, 1], [2, 1, 0]])  # latin square, no identity
    # identity may sit at any index: this is Z2 with identity at 1
    G = sp.FiniteGroup([[1, 0], [0, 1]])
    assert G.identity() == 1


def test_free_abelian_ball_is_l1():
    G = sp.FreeAbelianGroup(2)
    ball = G.ball(2)
    assert len(ball) == len(set(ball)) == 13  # 1 + 4 + 8
    assert all(abs(x) + abs(y) <= 2 for x, y in ball)


# ---------------------------------------------------------------------------
# measures and convolution

_Z5_MASS = st.lists(
    st.tuples(st.integers(0, 4), st.floats(0.01, 5.0)), min_size=1, max_size=6
)


def _measure(group, pairs):
    masses = {}
    for g, v in pairs:
        masses[g] = masses.get(g, 0.0) + v
    return sp.GroupMeasure(group, masses)


@given(_Z5_MASS, _Z5_MASS)
@settings(max_examples=60)
def test_convolve_matches_naive(p1, p2):
    G = sp.cyclic_group(5)
    mu, nu = _measure(G, p1), _measure(G, p2)
    got = sp.convolve(mu, nu)
    want = bf.naive_convolve(dict(mu.masses), dict(nu.masses), G.mul)
    assert set(got.masses) == {g for g, v in want.items() if v > 0}
    for g, v in want.items():
        assert got(g) == pytest.approx(v, rel=1e-12)


@given(_Z5_MASS, _Z5_MASS, _Z5_MASS)
@settings(max_examples=40)
def test_convolve_associative(p1, p2, p3):
    G = sp.cyclic_group(5)
    mu, nu, ka = _measure(G, p1), _measure(G, p2), _measure(G, p3)
    left = sp.convolve(sp.convolve(mu, nu), ka)
    right = sp.convolve(mu, sp.convolve(nu, ka))
    for g in G.elements():
        assert left(g) == pytest.approx(right(g), rel=1e-12, abs=1e-12)


@given(_F2_WORDS, _F2_WORDS)
def test_reflect_antihomomorphism(u, v):
    # reflect(mu * nu) = reflect(nu) * reflect(mu) on point masses
    G = sp.FreeGroup(2)
    g, h = _free_elem(G, u), _free_elem(G, v)
    prod = sp.convolve(sp.point_mass(G, g), sp.point_mass(G, h))
    lhs = sp.reflect(prod)
    rhs = sp.convolve(sp.reflect(sp.point_mass(G, h)), sp.reflect(sp.point_mass(G, g)))
    assert dict(lhs.masses) == dict(rhs.masses)


def test_convolution_power_matches_repeated():
    G = sp.FreeGroup(2)
    step = sp.GroupMeasure(G, {g: 0.25 for g in G.generators()})
    p4 = sp.convolution_power(step, 4)
    want = bf.naive_power({g: 0.25 for g in G.generators()}, 4, bf.free_mul, ())
    for g, v in want.items():
        assert p4(g) == pytest.approx(v, rel=1e-12)
    assert p4(()) == pytest.approx(bf.srw_return_count(2, 4) / 4 ** 4, rel=1e-12)


def test_pruning_accounts_for_dropped_mass():
    G = sp.FreeAbelianGroup(1)
    step = sp.GroupMeasure(G, {(1,): 0.5, (-1,): 0.5})
    exact = sp.convolution_power(step, 12)
    # threshold sits above the extreme binomial fibers 2^-12 = 2.44e-4
    pruned = sp.convolution_power(step, 12, prune_eps=3e-4)
    # accounted mass is conserved and the dropped part is tracked
    assert pruned.accounted_mass == pytest.approx(exact.total_mass, rel=1e-12)
    assert pruned.pruned_mass > 0
    assert pruned.total_mass <= exact.total_mass


def test_measure_rejects_negative_mass():
    G = sp.cyclic_group(3)
    with pytest.raises(sp.InputError):
        sp.GroupMeasure(G, {0: -0.1})
