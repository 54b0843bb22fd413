"""Transfer matrices and eigenpairs against closed forms."""

from __future__ import annotations

import math

import numpy as np
import pytest

import skewpress as sp


def test_full_shift_lambda_eigenvalue(full2):
    # weights per column letter: e^lam and e^-lam; leading eigenvalue is
    # their sum because the matrix is rank one
    lam = 0.8
    ts = sp.build_transfer(full2, sp.lambda_potential(lam))
    eig = sp.leading_eigenpair(ts.matrix)
    assert math.log(eig.value) == pytest.approx(
        math.log(math.e ** lam + math.e ** -lam), abs=1e-12
    )


def test_golden_mean_zero_potential_eigenvalue(golden):
    ts = sp.build_transfer(golden, sp.Potential.zero(golden))
    eig = sp.leading_eigenpair(ts.matrix)
    assert eig.value == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)


def test_eigenvector_positive_and_normalized(golden):
    ts = sp.build_transfer(golden, sp.Potential.zero(golden))
    eig = sp.leading_eigenpair(ts.matrix)
    assert np.all(eig.left > 0) and np.all(eig.right > 0)


def test_recoded_block_states(golden):
    # memory <= 2 lifts to K = 2, so states are single letters
    phi2 = sp.Potential(2, {(1, 1): 0.4, (1, 2): -0.2, (2, 1): 0.1})
    assert len(sp.build_transfer(golden, phi2).states) == 2
    # memory 3 needs 2-blocks: the three admissible golden-mean 2-words
    words3 = {w: 0.0 for w in golden.words(3)}
    phi3 = sp.Potential(3, words3)
    assert len(sp.build_transfer(golden, phi3).states) == 3


def test_eigenvalue_growth_matches_word_sums(golden):
    # lambda^n tracks the total weighted word count for large n
    ts = sp.build_transfer(golden, sp.Potential.zero(golden))
    eig = sp.leading_eigenpair(ts.matrix)
    n = 24
    count = golden.count_words(n)
    assert math.log(count) / n == pytest.approx(math.log(eig.value), abs=0.05)


def test_symmetric_top_eigenvalue_matches_numpy():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(8, 8))
    sym = a @ a.T
    lam, resid, k = sp.symmetric_top_eigenvalue(sym)
    want = float(np.linalg.eigvalsh(sym)[-1])
    assert lam == pytest.approx(want, rel=1e-9)
    # the residual is a rigorous bracket for symmetric matrices
    assert abs(lam - want) <= resid and k >= 1
