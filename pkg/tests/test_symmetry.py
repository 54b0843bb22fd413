"""Symmetry comparison constants, alpha exponents, and the corollary checks."""

import math

import pytest

import skewpress as sp


def test_window_schedule_forms():
    assert sp.window_schedule("zero", 2, 5) == {n: 0 for n in range(2, 6)}
    sq = sp.window_schedule("sqrt", 2, 9)
    assert sq[2] == 1 and sq[5] == 3 and sq[9] == 3
    assert all(0 <= w < n for n, w in sq.items())
    assert sp.window_schedule(1, 2, 4) == {2: 1, 3: 1, 4: 1}
    assert sp.window_schedule({3: 2}, 3, 4) == {3: 2, 4: 0}
    assert sp.window_schedule(lambda n: n // 2, 4, 5) == {4: 2, 5: 2}


def test_window_schedule_rejects_bad_specs():
    with pytest.raises(sp.InputError):
        sp.window_schedule("huge", 2, 5)
    with pytest.raises(sp.InputError):
        sp.window_schedule(2, 2, 5)  # N_2 = 2 is not < 2
    with pytest.raises(sp.InputError):
        sp.window_schedule(-1, 2, 5)


def test_alpha_estimate_rejects_bad_range(z_ext):
    with pytest.raises(sp.InputError):
        sp.alpha_estimate(z_ext, sp.Potential.zero(z_ext.shift), n_range=(5, 2))
    with pytest.raises(sp.InputError):
        sp.alpha_estimate(z_ext, sp.Potential.zero(z_ext.shift), n_range=(0, 4))


def test_symmetric_walk_certifies_alpha_one(f2_ext):
    pot = sp.Potential.zero(f2_ext.shift)
    cert = sp.alpha_estimate(f2_ext, pot, n_range=(2, 8))
    assert cert.ok and not cert.obstructions
    for _n, c in cert.c_n:
        assert c == pytest.approx(1.0, abs=1e-9)
    assert cert.alpha_hat == pytest.approx(1.0, abs=1e-9)


def test_biased_lattice_constants_are_exact(z_ext):
    pot = sp.lambda_potential(1.0)
    cert = sp.alpha_estimate(z_ext, pot, n_range=(2, 10))
    assert cert.ok
    for n, c in cert.c_n:
        # the worst fiber is the all-plus word: ratio e^(2n) on the nose
        assert c == pytest.approx(math.exp(2 * n), rel=1e-9)
    assert dict(cert.per_n_argmax_g)[10] == (10,)
    assert cert.alpha_hat == pytest.approx(math.e, abs=1e-6)


def test_window_softens_constants(z_ext):
    pot = sp.lambda_potential(0.5)
    tight = sp.alpha_estimate(z_ext, pot, n_range=(2, 10))
    wide = sp.alpha_estimate(z_ext, pot, n_range=(2, 10), window="sqrt")
    assert tight.ok and wide.ok
    for (n, cw), (_, ct) in zip(wide.c_n, tight.c_n):
        assert cw <= ct + 1e-12
    assert 1.0 <= wide.alpha_hat <= math.exp(0.5) + 1e-9


def test_one_way_walk_fails_certificate():
    shift = sp.Shift.full(2)
    ext = sp.GroupExtension(shift, sp.FreeAbelianGroup(1), {1: (1,), 2: (1,)})
    cert = sp.alpha_estimate(ext, sp.Potential.zero(shift), n_range=(2, 6))
    assert not cert.ok
    assert cert.c_n == ()
    assert math.isinf(cert.alpha_hat)
    assert cert.obstructions and cert.obstructions[0] == (2, (2,))


def test_partially_mirrored_walk_keeps_witnesses():
    shift = sp.Shift.full(2)
    ext = sp.GroupExtension(shift, sp.FreeAbelianGroup(1), {1: (1,), 2: (0,)})
    cert = sp.alpha_estimate(ext, sp.Potential.zero(shift), n_range=(2, 6))
    # the zero fiber has its own mirror, every positive fiber lacks one
    assert not cert.ok
    assert cert.c_n and math.isfinite(cert.alpha_hat)
    assert cert.obstructions


def test_constant_potential_shift_invariance(z_ext):
    base = sp.lambda_potential(1.0)
    shifted = sp.Potential.memory_one(
        {1: 1.0 + 0.37, 2: -1.0 + 0.37}
    )
    a = sp.alpha_estimate(z_ext, base, n_range=(2, 9))
    b = sp.alpha_estimate(z_ext, shifted, n_range=(2, 9))
    for (n, ca), (_, cb) in zip(a.c_n, b.c_n):
        assert cb == pytest.approx(ca, rel=1e-9), n
    assert b.alpha_hat == pytest.approx(a.alpha_hat, rel=1e-9)


def test_corollary_check_passes_on_lattice(z_ext):
    pot = sp.lambda_potential(1.0)
    base = sp.pressure_base(z_ext.shift, pot)
    extn = sp.pressure_extension(z_ext, pot, n_max=300)
    report = sp.corollary_check(
        z_ext, pot, math.e, {"base": base, "extension": extn}
    )
    assert report.ok
    names = [item.name for item in report.items]
    assert names == ["extension_vs_base", "extension_vs_radius"]
    for item in report.items:
        assert item.status == "PASS"
        assert item.gap >= 0.0
    # log 2 vs log(e + 1/e) - 1: the margin is genuinely positive
    assert report.items[0].gap == pytest.approx(
        math.log(2) - (base.value - 1.0), abs=2e-2
    )


def test_corollary_check_input_validation(z_ext):
    pot = sp.lambda_potential(1.0)
    with pytest.raises(sp.InputError):
        sp.corollary_check(z_ext, pot, 0.5, {"base": 1.0, "extension": 1.0})
    with pytest.raises(sp.InputError):
        sp.corollary_check(z_ext, pot, 2.0, {"base": 1.0})


def test_compact_alpha_flags_unreached_inverses():
    shift = sp.Shift.full(2)
    ext = sp.GroupExtension(shift, sp.FreeAbelianGroup(1), {1: (1,), 2: (1,)})
    certs = sp.compact_alpha(ext, sp.Potential.zero(shift), [(1,)], n_range=(2, 4))
    assert len(certs) == 1
    cert = certs[0]
    assert not cert.ok
    assert cert.details["inverse_closure"] == "unreached inverses for letters [1]"
    assert cert.details["letters"] == (1,)


def test_compact_alpha_full_level_is_clean(z_ext):
    pot = sp.Potential.zero(z_ext.shift)
    certs = sp.compact_alpha(z_ext, pot, [(1, 2)], n_range=(2, 6))
    cert = certs[0]
    assert cert.ok
    assert cert.details["inverse_closure"] == "ok"
    assert cert.alpha_hat == pytest.approx(1.0, abs=1e-9)
