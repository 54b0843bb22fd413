"""Potential tables, ergodic-sum bounds, normalization."""

from __future__ import annotations

import math

import pytest

import skewpress as sp
import bruteforce as bf

_GOLDEN_INC = [[1, 1], [1, 0]]


def test_value_table_validation(full2, golden):
    with pytest.raises(sp.InputError):
        sp.Potential(1, {})
    with pytest.raises(sp.InputError):
        sp.Potential(1, {(1, 2): 0.0})  # key length vs memory
    pot = sp.Potential(1, {(1,): 0.0})
    with pytest.raises(sp.InputError):
        pot.validate_against(full2)  # letter 2 missing
    # golden mean memory 2: (2,2) is inadmissible and must not appear
    bad = sp.Potential(2, {w: 0.0 for w in [(1, 1), (1, 2), (2, 1), (2, 2)]})
    with pytest.raises(sp.InputError):
        bad.validate_against(golden)


def test_lambda_potential_values():
    pot = sp.lambda_potential(0.5)
    assert pot((1,)) == 0.5 and pot((2,)) == -0.5


def test_ergodic_sum_bounds_match_oracle(golden):
    phi = sp.Potential(2, {(1, 1): 0.5, (1, 2): -0.3, (2, 1): 0.2})
    for w in golden.words(4):
        lo, hi = sp.ergodic_sum_bounds(golden, phi, w)
        want_hi = bf.sup_ergodic_sum(_GOLDEN_INC, phi.values, 2, w)
        assert hi == pytest.approx(want_hi, abs=1e-12)
        assert lo <= hi


def test_ergodic_sum_exact_for_memory_one(full2):
    phi = sp.lambda_potential(1.0)
    w = (1, 2, 2, 1)
    lo, hi = sp.ergodic_sum_bounds(full2, phi, w)
    assert lo == hi == pytest.approx(1 - 1 - 1 + 1)


def test_normalize_zeroes_pressure(full2):
    pot = sp.lambda_potential(1.0)
    norm = sp.normalize(full2, pot)
    assert norm.pressure == pytest.approx(math.log(math.e + 1 / math.e), abs=1e-12)
    # the normalized potential has pressure zero
    est = sp.pressure_base(full2, norm.potential)
    assert est.value == pytest.approx(0.0, abs=1e-10)


def test_normalize_golden_mean_row_sums(golden):
    # after normalization the transfer matrix is stochastic against the
    # eigenfunction weights; pressure of the normalized potential is 0
    pot = sp.Potential.zero(golden)
    norm = sp.normalize(golden, pot)
    assert norm.pressure == pytest.approx(math.log((1 + math.sqrt(5)) / 2), abs=1e-12)
    est = sp.pressure_base(golden, norm.potential)
    assert est.value == pytest.approx(0.0, abs=1e-10)


def test_variation_factor_one_for_memory_one(full2):
    # memory-1 sums are exact on every cylinder, so the distortion is 1
    assert sp.variation_factor(full2, sp.lambda_potential(2.0), 5) == pytest.approx(1.0)


def test_variation_factor_bounded_for_memory_two(golden):
    phi = sp.Potential(2, {(1, 1): 0.5, (1, 2): -0.3, (2, 1): 0.2})
    d4 = sp.variation_factor(golden, phi, 4)
    d8 = sp.variation_factor(golden, phi, 8)
    # only the unresolved tail window contributes, so D_n stays bounded
    assert 1.0 <= d8 <= d4 <= math.exp(0.8)


def test_restrict_potential_maps_letters(golden):
    # restrict golden mean to letter 1 (the full 1-shift), then pull back
    sub, letter_map = golden.restrict([1])
    pot = sp.Potential.memory_one({1: 0.7, 2: -0.1})
    sub_pot = sp.restrict_potential(pot, sub, letter_map)
    assert sub_pot((1,)) == 0.7
