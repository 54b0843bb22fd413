"""Growth rates: base pressure, identity-return pressure, exhaustions."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import skewpress as sp


def test_base_pressure_closed_form_full_shift():
    shift = sp.Shift.full(2)
    for lam in (0.5, 1.0):
        pot = sp.lambda_potential(lam)
        want = math.log(math.exp(lam) + math.exp(-lam))
        exact = sp.pressure_base(shift, pot)
        assert exact.method == "exact_spectral"
        assert exact.value == pytest.approx(want, abs=1e-12)
        fitted = sp.pressure_base(shift, pot, method="sequence")
        # memory-1 full shift: log z_n is exactly affine in n
        assert fitted.value == pytest.approx(want, abs=1e-8)


def test_base_pressure_golden_mean(golden):
    pot = sp.Potential.zero(golden)
    want = math.log((1 + math.sqrt(5)) / 2)
    exact = sp.pressure_base(golden, pot)
    assert exact.value == pytest.approx(want, abs=1e-12)
    fitted = sp.pressure_base(golden, pot, method="sequence")
    assert fitted.value == pytest.approx(want, abs=1e-5)
    assert fitted.fit_residual < 1e-4


@settings(max_examples=20, deadline=None)
@given(
    vals=st.lists(
        st.floats(-1.5, 1.5, allow_nan=False, allow_infinity=False),
        min_size=3,
        max_size=3,
    )
)
def test_sequence_method_tracks_spectral(vals):
    shift = sp.Shift.full(3)
    pot = sp.Potential.memory_one({i + 1: v for i, v in enumerate(vals)})
    want = math.log(sum(math.exp(v) for v in vals))
    est = sp.pressure_base(shift, pot, method="sequence")
    assert est.value == pytest.approx(want, abs=1e-8)
    assert est.details["spectral_value"] == pytest.approx(want, abs=1e-12)


def test_zn_zero_when_unsupported(golden):
    pot = sp.Potential.zero(golden)
    # 2 cannot follow 2, so no length-1 word at 2 is continuable by 2
    assert sp.z_n(golden, pot, 2, 1) == 0.0
    assert sp.z_n(golden, pot, 1, 1) == pytest.approx(1.0)


def test_extension_pressure_base_point_independent():
    shift = sp.Shift.full(3)
    pot = sp.Potential.zero(shift)
    ext = sp.GroupExtension(
        shift, sp.FreeAbelianGroup(1), {1: (1,), 2: (-1,), 3: (0,)}
    )
    vals = [sp.pressure_extension(ext, pot, a=a, n_max=60).value for a in (1, 2, 3)]
    for v in vals:
        assert v == pytest.approx(math.log(3), abs=2e-2)
    assert max(vals) - min(vals) < 5e-3


def test_parity_thins_supported_lengths(z_ext):
    pot = sp.Potential.zero(z_ext.shift)
    est = sp.pressure_extension(z_ext, pot, n_max=80)
    ns = [n for n, _ in est.sequence]
    assert ns and all(n % 2 == 0 for n in ns)
    assert est.details["supported_fraction"] == pytest.approx(0.5, abs=0.05)
    assert est.value == pytest.approx(math.log(2), abs=1e-2)


def test_radial_and_generic_engines_agree_on_free_rank_two(f2_ext):
    pot = sp.Potential.zero(f2_ext.shift)
    # generic sweep carries the whole radius-n ball, so keep n small here
    rad = sp.pressure_extension(f2_ext, pot, n_max=12)
    gen = sp.pressure_extension(f2_ext, pot, n_max=12, engine="generic")
    assert rad.method == "radial"
    assert gen.method == "sequence"
    # same identity-return sums, two independent evaluation paths
    assert rad.value == pytest.approx(gen.value, abs=1e-8)
    assert [n for n, _ in rad.sequence] == [n for n, _ in gen.sequence]
    for (_, lv_r), (_, lv_g) in zip(rad.sequence, gen.sequence):
        assert lv_r == pytest.approx(lv_g, abs=1e-9)


def test_radial_rate_reaches_kesten_value(f2_ext):
    pot = sp.Potential.zero(f2_ext.shift)
    rad = sp.pressure_extension(f2_ext, pot, n_max=400)
    assert rad.method == "radial"
    assert rad.value == pytest.approx(math.log(2 * math.sqrt(3)), abs=0.01)


def test_support_error_on_drifting_walk():
    shift = sp.Shift.full(2)
    ext = sp.GroupExtension(shift, sp.FreeAbelianGroup(1), {1: (1,), 2: (1,)})
    with pytest.raises(sp.SupportError, match="drift"):
        sp.pressure_extension(ext, sp.Potential.zero(shift), n_max=25)


def test_exhaustion_levels_monotone(f2_ext):
    pot = sp.Potential.zero(f2_ext.shift)
    levels = sp.exhaustion_pressures(f2_ext, pot, [(1, 2), (1, 2, 3, 4)], n_max=60)
    assert [lv.letters for lv in levels] == [(1, 2), (1, 2, 3, 4)]
    assert all(lv.mixing for lv in levels)
    b1, b2 = (lv.base.value for lv in levels)
    e1, e2 = (lv.extension.value for lv in levels)
    assert b1 == pytest.approx(math.log(2), abs=1e-10)
    assert b2 == pytest.approx(math.log(4), abs=1e-10)
    assert b1 <= b2 + 1e-12
    assert e1 <= e2 + 1e-6


def test_exhaustion_reports_unreturnable_level(f2_ext):
    pot = sp.Potential.zero(f2_ext.shift)
    levels = sp.exhaustion_pressures(f2_ext, pot, [(1,), (1, 2)], n_max=30)
    solo = levels[0]
    assert solo.mixing
    assert solo.base is not None and solo.base.value == pytest.approx(0.0, abs=1e-12)
    assert solo.extension is None
    assert "identity returns" in solo.note
