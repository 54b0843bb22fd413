"""Gibbs chain: cylinder masses, stationarity, audit constants, duality."""

from __future__ import annotations

import math

import numpy as np
import pytest

import skewpress as sp


def _mass_total(rpf, shift, depth):
    return math.fsum(sp.cylinder_mass(rpf, w) for w in shift.words(depth))


def test_cylinder_masses_sum_to_one(full2, golden):
    for shift, pot in [
        (full2, sp.lambda_potential(1.0)),
        (golden, sp.Potential.zero(golden)),
    ]:
        rpf = sp.rpf_solve(shift, pot)
        for depth in (1, 2, 5):
            assert _mass_total(rpf, shift, depth) == pytest.approx(1.0, abs=1e-12)


def test_cylinder_mass_refines_consistently(golden):
    # mass of [w] equals the sum over its admissible one-letter extensions
    rpf = sp.rpf_solve(golden, sp.Potential.zero(golden))
    for w in golden.words(3):
        children = [w + (j,) for j in golden.successors(w[-1])]
        total = math.fsum(sp.cylinder_mass(rpf, c) for c in children)
        assert total == pytest.approx(sp.cylinder_mass(rpf, w), rel=1e-12)


def test_stationary_distribution_fixed_by_chain(golden):
    rpf = sp.rpf_solve(golden, sp.Potential.zero(golden))
    pi = rpf.stationary
    assert pi @ rpf.transition == pytest.approx(pi, abs=1e-12)
    assert math.fsum(pi) == pytest.approx(1.0, abs=1e-12)
    assert np.all(rpf.transition >= 0)
    assert rpf.transition.sum(axis=1) == pytest.approx(np.ones(len(pi)), abs=1e-12)


def test_golden_mean_cylinder_masses_closed_form(golden):
    # for phi = 0 the Parry measure gives mass phi^-(n+ones) patterns; spot
    # check the one-letter cylinders against the exact eigenvector values
    rpf = sp.rpf_solve(golden, sp.Potential.zero(golden))
    phi = (1 + math.sqrt(5)) / 2
    m1 = sp.cylinder_mass(rpf, (1,))
    m2 = sp.cylinder_mass(rpf, (2,))
    assert m1 + m2 == pytest.approx(1.0, abs=1e-12)
    # Parry: p(1) = phi/(phi+1) ... = phi^2/(1+phi^2), p(2) = 1/(1+phi^2)
    assert m1 == pytest.approx(phi * phi / (1 + phi * phi), abs=1e-10)


def test_gibbs_audit_memory_one_constant_is_one(full2):
    pot = sp.lambda_potential(0.7)
    rpf = sp.rpf_solve(full2, pot)
    audit = sp.gibbs_audit(full2, pot, rpf, 8)
    assert audit.c_hat == pytest.approx(1.0, abs=1e-10)


def test_gibbs_audit_golden_mean_bounded(golden):
    rpf = sp.rpf_solve(golden, sp.Potential.zero(golden))
    audit = sp.gibbs_audit(golden, sp.Potential.zero(golden), rpf, 10)
    assert 1.0 <= audit.c_hat < 3.0
    assert audit.worst_ratio <= audit.c_hat + 1e-12
    assert golden.is_admissible(audit.worst_word)


def test_duality_defect_small(golden):
    pot = sp.Potential(2, {(1, 1): 0.3, (1, 2): -0.1, (2, 1): 0.2})
    norm = sp.normalize(golden, pot)
    rpf = sp.rpf_solve(golden, norm.potential)
    defect = sp.duality_defect(golden, norm.potential, rpf, 6)
    assert defect < 1e-10
