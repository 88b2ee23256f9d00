"""Acceptance criteria 1-12, each at its stated tolerance.

Every test records a PASS/FAIL line (see ``conftest.ACCEPTANCE``) before
asserting, so the summary lists all twelve even when some fail.
"""

import csv
import math
import time

import numpy as np
import pytest

import catalog
import conftest
import oracles
from distgini import cli, conditions
from distgini import distributions as D
from distgini import distortions as T
from distgini import extrema as X
from distgini import measures as M
from distgini import montecarlo as MC
from distgini.copulas import make_copula

EXP, UNIF, PLAW = D.exponential(1.0), D.uniform(0.0, 1.0), D.powerlaw(2.0)
PH, PRH = T.make_family("ph"), T.make_family("prh")
FGM = make_copula("fgm")
THETA_21 = np.linspace(-1.0, 1.0, 21)
ALPHA_21 = np.linspace(0.1, 10.0, 21)
ERF_ALPHAS = (0.5, 1.0, 2.0, 5.0, 10.0)


def record(number, ok, detail):
    conftest.ACCEPTANCE[number] = (bool(ok), detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_01_exponential_ph_closed_form():
    alphas = np.linspace(0.1, 10.0, 50)
    start = time.perf_counter()
    values = [M.eta(EXP, PH, float(a)).value for a in alphas]
    elapsed = time.perf_counter() - start
    err = max(abs(v - oracles.eta_exp_ph(a)) for v, a in zip(values, alphas))
    record(1, err <= 1e-7 and elapsed < 1.0, f"max error {err:.2e} (<= 1e-7), {elapsed:.3f} s (< 1 s)")


def test_02_exponential_ph_extremum():
    r = X.find_extremum(lambda a: M.eta(EXP, PH, a).value, (0.1, 10.0), interval=PH.alpha_interval)
    da = abs(r.alpha_star - (1 + math.sqrt(2)))
    dv = abs(r.value - (2 * math.sqrt(2) - 2))
    record(2, r.kind == "minimum" and da <= 1e-4 and dv <= 1e-7,
           f"argmin error {da:.2e} (<= 1e-4), value error {dv:.2e} (<= 1e-7)")


def test_03_fgm_surface():
    err = max(abs(M.nu(EXP, PH, float(a), FGM, float(t)).value - oracles.nu_exp_ph_fgm(t, a))
              for t in THETA_21 for a in ALPHA_21)
    gap = max(abs(M.nu(EXP, PH, float(a), FGM, 0.0).value - M.eta(EXP, PH, float(a)).value)
              for a in ALPHA_21)
    record(3, err <= 1e-7 and gap <= 1e-10,
           f"21x21 max error {err:.2e} (<= 1e-7), theta=0 vs eta {gap:.2e} (<= 1e-10)")


def test_04_uniform_formula():
    alphas = np.linspace(0.2, 9.7, 20)
    err = 0.0
    for f in (PH, PRH, T.make_family("pow", UNIF)):
        err = max(err, max(abs(M.eta(UNIF, f, float(a)).value - oracles.eta_uniform(a)) for a in alphas))
    record(4, err <= 1e-8, f"ph/prh/pow max error {err:.2e} (<= 1e-8)")


def test_05_erf_examples():
    gu = T.make_family("gah", UNIF, "t^2/2")
    ge = T.make_family("gah", EXP, "t^2/2")
    eu = max(abs(M.eta(UNIF, gu, a).value - oracles.eta_uniform_gah(a)) for a in ERF_ALPHAS)
    ee = max(abs(M.eta(EXP, ge, a).value - oracles.eta_exp_gah(a)) for a in ERF_ALPHAS)
    # Monte Carlo as the tie-breaker between quadrature and the closed forms
    ind = make_copula("independence")
    z = []
    for d, f, formula, seed in ((UNIF, gu, oracles.eta_uniform_gah, 51), (EXP, ge, oracles.eta_exp_gah, 52)):
        est = MC.estimate_nu(d, f, 2.0, ind, 0.0, n=1_000_000, seed=seed)
        z.append(abs(est.mean - formula(2.0)) / est.std_error)
    record(5, eu <= 1e-6 and ee <= 1e-6 and max(z) <= 3.0,
           f"uniform {eu:.2e}, exp {ee:.2e} (<= 1e-6); MC |z| vs formula {max(z):.2f} (<= 3)")


def test_06_example_surface_and_extrema():
    err = max(abs(M.nu(PLAW, PRH, float(a), FGM, float(t)).value - oracles.nu_powerlaw2_prh_fgm(t, a))
              for t in THETA_21 for a in ALPHA_21)
    worst_slope, kinds = 0.0, set()
    for t in THETA_21:
        r = X.find_extremum(lambda a: M.nu(PLAW, PRH, a, FGM, float(t)).value, (0.1, 10.0),
                            kind_hint="minimum", interval=PRH.alpha_interval)
        kinds.add(r.kind)
        if r.kind == "minimum":
            worst_slope = max(worst_slope, abs(M.nu_dalpha(PLAW, PRH, r.alpha_star, FGM, float(t))))
    record(6, err <= 1e-7 and kinds == {"minimum"} and worst_slope <= 1e-4,
           f"21x21 max error {err:.2e} (<= 1e-7), minimum found for all 21 theta: {kinds == {'minimum'}}, "
           f"max |dnu/dalpha| at argmin {worst_slope:.2e} (<= 1e-4)")


def test_07_limits():
    g = D.gmd(EXP).value
    ident = max(abs(M.eta(EXP, f, a).value - g) for f in (PH, PRH) for a in (1 - 1e-6, 1 + 1e-6))
    em = D.mean_minus_lower(EXP).value
    degen = max(abs(M.nu(EXP, f, a, FGM, float(t)).value - em)
                for f, a in ((PRH, 1e-9), (PH, 1e6)) for t in THETA_21)
    record(7, ident <= 1e-5 and degen <= 1e-4,
           f"identity gap {ident:.2e} (<= 1e-5), degenerate gap {degen:.2e} (<= 1e-4)")


MC_COMBOS = [
    (EXP, PH, 1.0, "independence", 0.0),
    (EXP, PH, 1.0, "fgm", 1.0),
    (PLAW, PRH, 1.0, "fgm", -1.0),
    (UNIF, T.make_family("gah", UNIF, "t^2/2"), 2.0, "fgm", 0.5),
    (D.weibull(2.0, 1.0), T.make_family("pow", D.weibull(2.0, 1.0)), 1.5, "fgm", -0.5),
    (EXP, T.make_family("gah", EXP, "t^2/2"), 0.7, "fgm", 1.0),
]


def test_08_monte_carlo_concordance():
    start = time.perf_counter()
    worst, estimates = 0.0, []
    for k, (d, f, a, cid, t) in enumerate(MC_COMBOS):
        c = make_copula(cid)
        est = MC.estimate_nu(d, f, a, c, t, n=1_000_000, seed=100 + k)
        estimates.append(est)
        worst = max(worst, abs(est.mean - M.nu(d, f, a, c, t).value) / est.std_error)
    elapsed = time.perf_counter() - start
    d, f, a, cid, t = MC_COMBOS[1]
    again = MC.estimate_nu(d, f, a, make_copula(cid), t, n=1_000_000, seed=101)
    same = again == estimates[1]
    record(8, worst <= 3.0 and same and elapsed < 30.0,
           f"max |MC - quad| / SE {worst:.2f} (<= 3), reproducible {same}, {elapsed:.1f} s (< 30 s)")


def test_09_axioms():
    alphas, thetas = (0.3, 1.0, 2.5, 7.0), (-1.0, -0.3, 0.0, 0.6, 1.0)
    shifted, scaled = D.shifted(EXP, 3.0), D.scaled(EXP, 2.5)
    shift_err = scale_err = 0.0
    min_value, order_gap = math.inf, -math.inf
    for f in (PH, PRH, T.make_family("gah", EXP, "t")):
        for a in alphas:
            for t in thetas:
                base = M.nu(EXP, f, a, FGM, t).value
                if f.model != "gah":  # the additive model is not location-free
                    shift_err = max(shift_err, abs(M.nu(shifted, f, a, FGM, t).value - base))
                    scale_err = max(scale_err, abs(M.nu(scaled, f, a, FGM, t).value - 2.5 * base))
                    order_gap = max(order_gap, M.nu(D.exponential(2.0), f, a, FGM, t).value - base)
                min_value = min(min_value, base)
    ok = shift_err <= 1e-7 and scale_err <= 1e-7 and min_value >= -1e-9 and order_gap <= 1e-9
    record(9, ok, f"shift {shift_err:.2e}, scale {scale_err:.2e} (<= 1e-7), min nu {min_value:.3g} "
                  f"(>= -1e-9), exp(2) - exp(1) max {order_gap:.3g} (<= 1e-9)")


def test_10_soundness_audit():
    rows = conditions.audit(catalog.contexts())
    fired = [r for r in rows if r[2].conclusion_verified != "untested"]
    failures = [(tid, ctx["d"].label, ctx["f"].label) for tid, ctx, rep in rows
                if rep.conclusion_verified == "fails"]
    residual = max((rep.details.get("decomposition_residual", 0.0) for _, _, rep in rows), default=0.0)
    record(10, not failures and residual <= 1e-7,
           f"{len(rows)} reports, {len(fired)} with a fired branch, {len(failures)} counterexamples, "
           f"max decomposition residual {residual:.2e}")


def test_11_derivative_identities():
    rng = np.random.default_rng(20261017)
    tight = dict(abs_tol=1e-13, rel_tol=1e-13)
    worst = 0.0
    choices = [(EXP, PH), (EXP, PRH), (PLAW, PRH), (UNIF, PH), (D.weibull(2.0, 1.0), PH),
               (EXP, T.make_family("gah", EXP, "t^2/2")), (PLAW, T.make_family("pow", PLAW))]
    for _ in range(30):
        d, f = choices[rng.integers(len(choices))]
        a, t = float(rng.uniform(0.3, 5.0)), float(rng.uniform(-1.0, 1.0))
        pairs = (
            (M.nu_dalpha(d, f, a, FGM, t),
             oracles.central_difference(lambda x: M.nu(d, f, x, FGM, t, **tight).value, a)),
            (M.eta_dalpha(d, f, a),
             oracles.central_difference(lambda x: M.eta(d, f, x, **tight).value, a)),
        )
        for analytic, fd in pairs:
            worst = max(worst, abs(analytic - fd) / max(abs(fd), 1e-3))
    u = np.linspace(0.0, 0.5, 1001)
    sym = max(float(np.max(np.abs(FGM.d2(t, u, u) + FGM.d2(t, 1 - u, 1 - u) - 1.0))) for t in THETA_21)
    record(11, worst <= 1e-5 and sym <= 1e-12,
           f"max relative FD error {worst:.2e} (<= 1e-5), diagonal identity {sym:.2e} (<= 1e-12)")


def _read(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_12_figures(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.figures(a)
    cli.figures(b)
    same = all((a / p.name).read_bytes() == p.read_bytes() for p in b.iterdir())
    checks = {
        "fig1_eta": (lambda r: oracles.eta_exp_ph(float(r["alpha"])), 1e-7),
        "fig1": (lambda r: oracles.nu_exp_ph_fgm(float(r["theta"]), float(r["alpha"])), 1e-7),
        "fig2": (lambda r: oracles.eta_uniform_gah(float(r["alpha"])), 1e-6),
        "fig2_exp": (lambda r: oracles.eta_exp_gah(float(r["alpha"])), 1e-6),
        "fig3": (lambda r: oracles.nu_powerlaw2_prh_fgm(float(r["theta"]), float(r["alpha"])), 1e-7),
    }
    errors = {}
    for name, (formula, tol) in checks.items():
        rows = _read(a / f"{name}.csv")
        errors[name] = (max(abs(float(r["value"]) - formula(r)) for r in rows), tol)
    ok = same and all(e <= tol for e, tol in errors.values())
    detail = ", ".join(f"{k} {e:.1e}" for k, (e, _) in errors.items())
    record(12, ok, f"deterministic {same}; max errors {detail}")
