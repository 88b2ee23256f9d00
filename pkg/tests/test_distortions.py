import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from distgini import distributions as D
from distgini import distortions as T
from distgini.errors import AlphaOutOfRange, ConfigError, InvalidModel, MissingK, OutsideSupport, UOutOfRange

EXP = D.exponential(1.0)
UNIF = D.uniform(0.0, 1.0)
PLAW = D.powerlaw(2.0)
W2 = D.weibull(2.0, 1.0)

FAMILIES = [
    ("ph", T.make_family("ph")),
    ("prh", T.make_family("prh")),
    ("gah-exp", T.make_family("gah", EXP, "t^2/2")),
    ("gah-unif", T.make_family("gah", UNIF, "t")),
    ("pow-plaw", T.make_family("pow", PLAW)),
    ("pow-w2", T.make_family("pow", W2)),
]
ALPHAS = (0.3, 0.9, 1.0, 1.7, 4.0)
U = np.linspace(0.0, 1.0, 501)
INNER = U[1:-1]


@pytest.mark.parametrize("name, f", FAMILIES)
def test_boundary_and_monotone(name, f):
    for a in ALPHAS:
        hv = f.value(a, U)
        assert hv[0] == 0.0 and hv[-1] == 1.0
        assert np.all(np.diff(hv) >= -1e-12)
        assert np.all((hv >= 0) & (hv <= 1))


@pytest.mark.parametrize("name, f", FAMILIES)
def test_inverse_roundtrip(name, f):
    for a in ALPHAS:
        hv = f.value(a, INNER)
        # points where h underflows to 0 or rounds to 1 carry no information
        ok = (hv > 1e-300) & (hv < 1.0 - 1e-12)
        back = f.inverse(a, hv[ok], iterations=200, tol=1e-13)
        assert np.max(np.abs(back - INNER[ok])) <= 1e-9


@pytest.mark.parametrize("name, f", FAMILIES)
def test_analytic_derivatives_match_differences(name, f):
    u = np.linspace(0.05, 0.95, 19)
    for a in (0.5, 1.3, 3.0):
        step = 1e-6
        fd_a = (f.value(a + step, u) - f.value(a - step, u)) / (2 * step)
        fd_u = (f.value(a, u + step) - f.value(a, u - step)) / (2 * step)
        assert np.allclose(f.d_alpha(a, u), fd_a, rtol=1e-5, atol=1e-8)
        assert np.allclose(f.d_u(a, u), fd_u, rtol=1e-5, atol=1e-8)


@pytest.mark.parametrize("name, f", FAMILIES)
def test_limit_flags_agree_with_grid(name, f):
    if f.alpha_identity is not None:
        assert T.identity_limit_holds(f)
    if f.alpha_degenerate is not None:
        assert T.degenerate_limit_holds(f)


def test_degenerate_points():
    assert T.make_family("ph").alpha_degenerate == math.inf
    assert T.make_family("prh").alpha_degenerate == 0.0
    assert T.make_family("gah", EXP, "t").alpha_degenerate == math.inf
    assert T.make_family("pow", UNIF).alpha_degenerate == 0.0
    assert T.make_family("pow", EXP).alpha_degenerate is None


def test_table_examples():
    assert T.evaluate(T.make_family("ph"), 2, 0.5) == 0.25
    assert T.evaluate(T.make_family("prh"), 2, 0.5) == 0.75
    gah = T.make_family("gah", UNIF, "t^2/2")
    assert T.evaluate(gah, 2, 0.5) == pytest.approx(0.5 * math.exp(-0.25), rel=1e-14)
    assert T.evaluate(T.make_family("pow", PLAW), 3, 0.75) == pytest.approx(0.984375, rel=1e-13)


@pytest.mark.parametrize("name, f", FAMILIES)
def test_endpoints_pinned(name, f):
    assert T.evaluate(f, 1.5, 0.0) == 0.0
    assert T.evaluate(f, 1.5, 1.0) == 1.0
    assert T.derivative_alpha(f, 1.5, 0.0) == 0.0
    assert T.derivative_alpha(f, 1.5, 1.0) == 0.0


def test_derivative_examples():
    assert T.derivative_alpha(T.make_family("ph"), 1, 0.5) == pytest.approx(0.5 * math.log(0.5), rel=1e-14)
    assert T.derivative_alpha(T.make_family("prh"), 1, 0.5) == pytest.approx(-0.5 * math.log(0.5), rel=1e-14)


def test_argument_checks():
    with pytest.raises(UOutOfRange):
        T.evaluate(T.make_family("ph"), 2, 1.5)
    with pytest.raises(AlphaOutOfRange):
        T.evaluate(T.make_family("ph"), -1, 0.5)
    with pytest.raises(AlphaOutOfRange):
        T.make_family("ph").check_alpha(math.nan)


def test_hazard_examples():
    v = T.DistortedVariable(EXP, T.make_family("ph"), 3.0)
    assert T.hazard_of_distorted(v, 0.7) == pytest.approx(3.0, rel=1e-12)
    v2 = T.DistortedVariable(EXP, T.make_family("prh"), 2.0)
    F = 1 - math.exp(-1)
    g2 = (F - F * F) / (1 - F * F)
    assert g2 == pytest.approx(F / (1 + F), rel=1e-14)
    assert g2 == pytest.approx(0.3873, abs=1e-6)
    assert T.hazard_of_distorted(v2, 1.0) == pytest.approx(2 * 1.0 * g2, rel=1e-12)
    for fam in (T.make_family("ph"), T.make_family("prh")):
        ident = T.DistortedVariable(W2, fam, 1.0)
        assert ident.hazard(0.8) == pytest.approx(W2.hazard(0.8), rel=1e-12)
    with pytest.raises(OutsideSupport):
        T.hazard_of_distorted(v, -1.0)


def test_distorted_variable_sf_is_a_survival_function():
    v = T.DistortedVariable(W2, T.make_family("gah", W2, "t"), 1.5)
    x = np.linspace(1e-6, 6, 400)
    s = v.sf(x)
    assert np.all(np.diff(s) <= 0) and s[0] == pytest.approx(1.0, abs=1e-5) and s[-1] < 1e-10
    assert v.sf_inverse(v.sf(1.2)) == pytest.approx(1.2, rel=1e-9)


def test_series_and_parallel_systems():
    # u^n is the survival function of the minimum of n iid copies, and
    # 1 - (1-u)^n that of the maximum; compared with simulated systems
    rng = np.random.default_rng(11)
    n, m = 3, 200_000
    draws = W2.sf_inverse(rng.random((m, n)))
    x = np.array([0.3, 0.6, 0.9, 1.4])
    for fam, system in ((T.make_family("ph"), draws.min(axis=1)), (T.make_family("prh"), draws.max(axis=1))):
        empirical = (system[:, None] > x).mean(axis=0)
        expected = fam.value(float(n), W2.sf(x))
        se = np.sqrt(expected * (1 - expected) / m)
        assert np.all(np.abs(empirical - expected) <= 4 * se + 1e-12)


@given(st.floats(0.05, 10.0), st.floats(0.001, 0.999))
def test_gah_log_ratio_is_alpha_k(alpha, u):
    f = T.make_family("gah", EXP, "t^2/2")
    lhs = -math.log(T.evaluate(f, alpha, u) / u)
    assert lhs == pytest.approx(alpha * (-math.log(u)) ** 2 / 2, rel=1e-9, abs=1e-12)


@given(st.floats(0.05, 20.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_h_monotone_in_u(alpha, u1, u2):
    lo, hi = sorted((u1, u2))
    for _, f in FAMILIES:
        assert T.evaluate(f, alpha, lo) <= T.evaluate(f, alpha, hi) + 1e-12


def test_parse_k_and_distortion():
    k = T.parse_k("3*t^2/4")
    assert (k.coef, k.power) == (0.75, 2.0) and k.monotonicity == "increasing"
    assert T.parse_k("t").power == 1.0
    assert T.parse_distortion("gah:K=t^2/2", EXP).label == "gah:K=t^2/2"
    assert T.parse_distortion(" PH ", EXP).model == "ph"
    with pytest.raises(MissingK):
        T.parse_distortion("gah", EXP)
    with pytest.raises(MissingK):
        T.make_family("gah", EXP)
    with pytest.raises(InvalidModel):
        T.make_family("weird")
    with pytest.raises(InvalidModel):
        T.make_family("pow")
    with pytest.raises(ConfigError):
        T.parse_k("sin(t)")


def test_callable_k_with_declared_monotonicity():
    custom = T.CustomK(lambda t: t ** 2 / 2, monotonicity="increasing", text="t^2/2")
    f = T.make_family("gah", EXP, custom)
    g = T.make_family("gah", EXP, "t^2/2")
    assert np.allclose(f.value(2.0, INNER), g.value(2.0, INNER), rtol=1e-15)
    assert np.allclose(f.d_u(2.0, INNER[5:-5]), g.d_u(2.0, INNER[5:-5]), rtol=1e-6)
    assert f.alpha_degenerate == math.inf
    with pytest.raises(MissingK):
        T.make_family("gah", EXP, lambda t: -t)


def test_bisection_fallback():
    v = np.array([0.1, 0.5, 0.9])
    u = T.bisect_inverse(lambda x: x ** 3, v, iterations=80, tol=1e-12)
    assert np.allclose(u, v ** (1 / 3), atol=1e-12)
