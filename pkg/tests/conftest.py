from __future__ import annotations

import pytest

import skewpress as sp


@pytest.fixture
def full2():
    return sp.Shift.full(2)


@pytest.fixture
def golden():
    return sp.Shift.golden_mean()


@pytest.fixture
def z_ext(full2):
    return sp.GroupExtension(full2, sp.FreeAbelianGroup(1), {1: (1,), 2: (-1,)})


@pytest.fixture
def f2_ext():
    shift = sp.Shift.full(4)
    psi = {1: (1,), 2: (-1,), 3: (2,), 4: (-2,)}
    return sp.GroupExtension(shift, sp.FreeGroup(2), psi)
