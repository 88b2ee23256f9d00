import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from distgini import copulas as C
from distgini.errors import InvalidFamilyId, NoRoot, ThetaOutOfRange

FGM = C.make_copula("fgm")
IND = C.make_copula("independence")
THETAS = np.linspace(-1.0, 1.0, 21)


def test_fgm_values():
    assert FGM.c(0.0, 0.3, 0.7) == pytest.approx(0.21, abs=1e-15)
    assert FGM.c(1.0, 0.5, 0.5) == pytest.approx(0.3125, abs=1e-15)
    assert FGM.c(-1.0, 0.5, 0.5) == pytest.approx(0.1875, abs=1e-15)


@pytest.mark.parametrize("theta", THETAS)
def test_fgm_is_a_copula(theta):
    assert C.validate_copula(FGM, theta) == {
        "boundary": True, "two_increasing": True, "frechet_hoeffding": True}


def test_independence_is_a_copula():
    assert all(C.validate_copula(IND, 0.0).values())


def test_validation_catches_a_non_copula():
    # theta = 2 leaves the FGM range and breaks 2-increasingness
    bad = replace(FGM, theta_interval=(-3.0, 3.0))
    assert C.validate_copula(bad, 3.0)["two_increasing"] is False


@pytest.mark.parametrize("theta", [-1.0, -0.3, 0.4, 1.0])
def test_partial_derivatives_match_differences(theta):
    g = np.linspace(0.05, 0.95, 19)
    u, v = np.meshgrid(g, g)
    h = 1e-6
    fd1 = (FGM.c(theta, u + h, v) - FGM.c(theta, u - h, v)) / (2 * h)
    fd2 = (FGM.c(theta, u, v + h) - FGM.c(theta, u, v - h)) / (2 * h)
    assert np.allclose(FGM.d1(theta, u, v), fd1, rtol=1e-5)
    assert np.allclose(FGM.d2(theta, u, v), fd2, rtol=1e-5)


def test_diagonal_symmetry_identity():
    u = np.linspace(0.0, 0.5, 1001)
    for theta in THETAS:
        total = FGM.d2(theta, u, u) + FGM.d2(theta, 1 - u, 1 - u)
        assert np.max(np.abs(total - 1.0)) <= 1e-12


@pytest.mark.parametrize("f, theta", [(IND, 0.0), (FGM, 1.0), (FGM, -1.0), (FGM, 0.3)])
def test_diagonal_lower_bound(f, theta):
    assert C.diagonal_bound_check(f, theta).conclusion_verified == "holds"


def test_conditional_inverse_examples():
    assert C.conditional_inverse(IND, 0.0, 0.77, 0.4) == 0.4
    for theta in THETAS:
        assert C.conditional_inverse(FGM, theta, 0.5, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert C.conditional_inverse(FGM, 1.0, 0.0, 0.5) == pytest.approx((2 - math.sqrt(2)) / 2, abs=1e-15)


@given(st.floats(-1, 1), st.floats(0, 1), st.floats(0, 1))
def test_conditional_inverse_solves_d1(theta, u, w):
    v = C.conditional_inverse(FGM, theta, u, w)
    assert 0.0 <= v <= 1.0
    assert FGM.d1(theta, u, v) == pytest.approx(w, abs=1e-12)


@pytest.mark.parametrize("theta", [-1.0, 0.0, 0.6, 1.0])
def test_conditional_inverse_increasing_in_w(theta):
    w = np.linspace(0, 1, 401)
    for u in (0.0, 0.1, 0.5, 0.93):
        v = C.conditional_inverse(FGM, theta, u, w)
        assert np.all(np.diff(v) >= 0)


def test_bisection_fallback_matches_closed_form():
    no_inverse = replace(FGM, inverse_d1=None)
    u = np.linspace(0, 1, 11)
    w = np.linspace(0.05, 0.95, 11)
    for theta in (-1.0, 0.5):
        assert np.allclose(C.conditional_inverse(no_inverse, theta, u, w),
                           C.conditional_inverse(FGM, theta, u, w), atol=1e-12)
    with pytest.raises(NoRoot):
        C.conditional_inverse(no_inverse, 0.5, 0.2, 1.5)


@pytest.mark.parametrize("theta", [-1.0, 1.0])
def test_sampled_pairs_reproduce_copula(theta):
    rng = np.random.default_rng(2024)
    n = 100_000
    u = rng.random(n)
    v = C.conditional_inverse(FGM, theta, u, rng.random(n))
    g = np.linspace(0.1, 1.0, 10)
    gu, gv = np.meshgrid(g, g, indexing="ij")
    empirical = ((u[:, None, None] <= gu) & (v[:, None, None] <= gv)).mean(axis=0)
    expected = FGM.c(theta, gu, gv)
    se = np.sqrt(expected * (1 - expected) / n) + 1e-12
    assert np.max(np.abs(empirical - expected) / se) < 4.5


def test_theta_checks_and_ids():
    with pytest.raises(ThetaOutOfRange):
        FGM.check_theta(1.5)
    with pytest.raises(ThetaOutOfRange):
        IND.check_theta(0.5)
    with pytest.raises(InvalidFamilyId):
        C.make_copula("clayton")
    assert len(FGM.theta_grid()) == 21 and list(IND.theta_grid()) == [0.0]
