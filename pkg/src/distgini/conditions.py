"""Grid checkers for the sufficient conditions on extrema of eta and nu.

Each check evaluates the pointwise hypotheses of one result on a grid of
``u`` in ``[0, 1/2]``, computes any integral hypotheses by quadrature,
decides which branch (if any) fires, and then re-verifies the conclusion of
every fired branch independently with the measures module.

Theorem ids:

``T3.1``  ``q(1-u)[1-u-h(1-u)]`` vs ``q(u)[u-h(u)]``; conclusion ``eta`` vs ``GMD``.
``T3.2``  ``q(u)h(u)`` vs ``q(1-u)h(1-u)``; conclusion ``eta`` vs ``E(X)-l``.
``T3.3``  ``q(u) dh(u)`` vs ``q(1-u) dh(1-u)`` at the identity parameter;
          conclusion the sign of ``d eta / d alpha`` there.
``T3.4``  additive hazard model with monotone ``K``, NWU/NBU and Gini index
          against 1/2; conclusion an interior minimum (maximum) of ``eta``.
``T4.1``  copula version of T3.1; conclusion ``nu(alpha)`` vs ``nu(alpha_I)``.
``T4.2``  conclusion ``nu`` vs ``E(X)-l``.
``T4.3``  diagonal derivative conditions; conclusion the sign of
          ``d nu / d alpha`` at the identity parameter.
``T4.4``  ``int_{1/2}^1 q(u)(4u-3) du >= 0`` with A2.4; conclusion
          ``nu(theta, alpha_I) <= E(X)-l``.
``A2.3``, ``A2.4``  the dual quantile density symmetry assumptions.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .copulas import SurvivalCopulaFamily, make_copula
from .distortions import DistortionFamily, degenerate_limit_holds, identity_limit_holds
from .distributions import (
    ContinuousDistribution,
    aging_class,
    dqdf_symmetry,
    gini_index,
    gmd,
    mean_minus_lower,
)
from .errors import MissingContext
from .measures import eta, eta_dalpha, nu, nu_dalpha
from .quadrature import integrate_01
from .report import ConditionReport, compare_on_grid, reading_holds

__all__ = ["THEOREM_IDS", "check", "grid_half", "audit", "nu_at_identity", "limit_dnu"]

THEOREM_IDS = ("T3.1", "T3.2", "T3.3", "T3.4", "T4.1", "T4.2", "T4.3", "T4.4", "A2.3", "A2.4")

GRID_POINTS = 1001
GRID_TOL = 1e-9
MEASURE_TOL = 1e-7
U_NUDGE = 1e-9

_PRODUCT = make_copula("independence")


def grid_half(n=GRID_POINTS):
    """``n`` points on ``[0, 1/2]`` with the left end nudged off zero."""
    u = np.linspace(0.0, 0.5, n)
    u[0] = U_NUDGE
    return u


def _q(d, u):
    return d.dqdf(u, 1.0 - u)


def _q_mirror(d, u):
    # q(1-u) with the complement passed exactly
    return d.dqdf(1.0 - u, u)


def _as_list(x) -> list:
    if x is None:
        return []
    if isinstance(x, (list, tuple, np.ndarray)):
        return [float(v) for v in x]
    return [float(x)]


def _combine(directions: Iterable[str]) -> str:
    directions = list(directions)
    le = all(reading_holds(d, "le") for d in directions)
    ge = all(reading_holds(d, "ge") for d in directions)
    if le and ge:
        return "both-boundary"
    return "le" if le else ("ge" if ge else "neither")


def _verdict(oks):
    oks = [ok for ok in oks if ok is not None]
    if not oks:
        return "untested"
    return "holds" if all(oks) else "fails"


def _half_integral(g):
    """``int_0^{1/2} g(u) du`` with exact complements available to ``g``."""
    return integrate_01(lambda v: 0.5 * g(0.5 * v)).value


def _require(name, value, theorem):
    if value is None or (isinstance(value, list) and not value):
        raise MissingContext(f"{theorem} needs {name}")


def _thetas(copula, theta):
    ts = _as_list(theta)
    return ts if ts else [float(t) for t in copula.theta_grid()]


def nu_at_identity(d, c, theta):
    """``nu(theta, alpha_I) = int q(u) {2u - 2 C(u, u)} du``."""
    c.check_theta(theta)
    return integrate_01(lambda u, ub: d.dqdf(u, ub) * (2.0 * u - 2.0 * c.c(theta, u, u)),
                        complement=True).value


def limit_dnu(d, f, c, theta):
    """``lim_{alpha -> alpha_I} d nu / d alpha`` evaluated at ``alpha_I``.

    Passing the independence copula gives the limit of ``d eta / d alpha``.
    """
    a = f.alpha_identity

    def integrand(u, ub):
        return d.dqdf(u, ub) * f.d_alpha(a, u) * (1.0 - 2.0 * c.d2(theta, u, u))

    return integrate_01(integrand, complement=True).value


# -- independence ------------------------------------------------------------

def _pointwise(theorem, d, f, alphas, sides, measure, target, target_name):
    """Shared body of T3.1 and T3.2.

    ``sides(alpha, u)`` returns (lhs, rhs); the "le" reading implies
    ``measure(alpha) <= target``.
    """
    u = grid_half()
    directions, violations, per_alpha = [], [], {}
    for a in alphas:
        f.check_alpha(a)
        lhs, rhs = sides(a, u)
        direction, viol = compare_on_grid(u, lhs, rhs, GRID_TOL)
        directions.append(direction)
        violations += viol
        per_alpha[a] = direction
    terms = {target_name: target}
    oks, implied = [], []
    for a, direction in per_alpha.items():
        if direction == "neither":
            continue
        value = measure(a)
        terms[f"eta({a:g})"] = value
        if reading_holds(direction, "le"):
            implied.append(f"eta({a:g}) <= {target_name}")
            oks.append(value <= target + MEASURE_TOL)
        if reading_holds(direction, "ge"):
            implied.append(f"eta({a:g}) >= {target_name}")
            oks.append(value >= target - MEASURE_TOL)
    return ConditionReport(
        theorem_id=theorem,
        direction=_combine(directions),
        pointwise_violations=violations,
        integral_terms=terms,
        implied_conclusion="; ".join(implied) or "none",
        conclusion_verified=_verdict(oks),
        details={"direction_by_alpha": per_alpha},
    )


def _t31(d, f, alphas, **_):
    def sides(a, u):
        ub = 1.0 - u
        lhs = _q_mirror(d, u) * (ub - f.value(a, ub))
        rhs = _q(d, u) * (u - f.value(a, u))
        return lhs, rhs

    return _pointwise("T3.1", d, f, alphas, sides,
                      lambda a: eta(d, f, a).value, gmd(d).value, "GMD")


def _t32(d, f, alphas, **_):
    def sides(a, u):
        return _q(d, u) * f.value(a, u), _q_mirror(d, u) * f.value(a, 1.0 - u)

    return _pointwise("T3.2", d, f, alphas, sides,
                      lambda a: eta(d, f, a).value, mean_minus_lower(d).value, "E(X)-l")


def _identity_sides(d, f, u):
    a = f.alpha_identity
    return _q(d, u) * f.d_alpha(a, u), _q_mirror(d, u) * f.d_alpha(a, 1.0 - u)


def _t33(d, f, **_):
    if f.alpha_identity is None:
        raise MissingContext("T3.3 needs a family with an identity parameter")
    u = grid_half()
    lhs, rhs = _identity_sides(d, f, u)
    direction, violations = compare_on_grid(u, lhs, rhs, GRID_TOL)
    limit = limit_dnu(d, f, _PRODUCT, 0.0)
    terms = {"lim_deta_dalpha": limit}
    if f.contains(f.alpha_identity):
        terms["deta_dalpha_at_identity"] = eta_dalpha(d, f, f.alpha_identity)
    implied, oks = [], []
    if reading_holds(direction, "le"):
        implied.append("lim d eta/d alpha <= 0")
        oks.append(limit <= MEASURE_TOL)
    if reading_holds(direction, "ge"):
        implied.append("lim d eta/d alpha >= 0")
        oks.append(limit >= -MEASURE_TOL)
    return ConditionReport(
        theorem_id="T3.3",
        direction=direction,
        pointwise_violations=violations,
        integral_terms=terms,
        implied_conclusion="; ".join(implied) or "none",
        conclusion_verified=_verdict(oks),
    )


def _k_monotonicity(d, f):
    if f.k_function is not None and f.k_function.monotonicity is not None:
        return f.k_function.monotonicity
    # undeclared K: recover it from h on a grid, K(x) = -log(h/u)/alpha
    u = np.linspace(0.0, 1.0, 2003)[1:-1][::-1]
    kx = -np.log(f.value(1.0, u) / u)
    dk = np.diff(kx)
    if np.all(dk >= -1e-12):
        return "increasing"
    if np.all(dk <= 1e-12):
        return "decreasing"
    return "neither"


def _interior_extremum(d, f, kind, n=400):
    """Compare ``eta`` on a log grid with its two endpoint limits."""
    lo = max(f.alpha_interval[0], 1e-3)
    alphas = np.geomspace(lo, 1e3, n)
    values = np.array([eta(d, f, float(a)).value for a in alphas])
    ends = (gmd(d).value, mean_minus_lower(d).value)
    if kind == "minimum":
        i = int(np.argmin(values))
        ok = values[i] <= min(ends) + MEASURE_TOL
    else:
        i = int(np.argmax(values))
        ok = values[i] >= max(ends) - MEASURE_TOL
    return ok, float(alphas[i]), float(values[i])


def _t34(d, f, **_):
    if f.model != "gah":
        raise MissingContext("T3.4 applies to the additive hazard model (gah) only")
    mono = _k_monotonicity(d, f)
    aging = aging_class(d)
    G = gini_index(d)
    # int sf (2 sf - 1) dx in the u-domain
    nwu_step = integrate_01(lambda u, ub: d.dqdf(u, ub) * u * (u - ub), complement=True).value
    branches = {
        "minimum": mono == "increasing" and aging.nwu in ("holds", "boundary") and G <= 0.5 + 1e-12,
        "maximum": mono == "decreasing" and aging.nbu in ("holds", "boundary") and G >= 0.5 - 1e-12,
    }
    terms = {"gini_index": G, "int_sf_2sf_minus_1": nwu_step,
             "lim_deta_dalpha": limit_dnu(d, f, _PRODUCT, 0.0)}
    details = {"K_monotonicity": mono, "aging": aging, "branches": branches}
    implied, oks = [], []
    for kind, fired in branches.items():
        if not fired:
            continue
        ok, a_star, value = _interior_extremum(d, f, kind)
        implied.append(f"eta has a {kind}")
        details[f"{kind}_at"] = (a_star, value)
        oks.append(ok)
        if kind == "minimum" and aging.nwu in ("holds", "boundary"):
            details["nwu_step_nonpositive"] = nwu_step <= MEASURE_TOL
    if branches["minimum"]:
        direction = "le"
    elif branches["maximum"]:
        direction = "ge"
    else:
        direction = "neither"
    return ConditionReport(
        theorem_id="T3.4",
        direction=direction,
        integral_terms=terms,
        implied_conclusion="; ".join(implied) or "none",
        conclusion_verified=_verdict(oks),
        details=details,
    )


# -- dependence --------------------------------------------------------------

def _symmetry_reading(d):
    rep = dqdf_symmetry(d)
    return {"A2.3": reading_holds(rep.direction, "ge"),
            "A2.4": reading_holds(rep.direction, "le")}, rep


def _pairings(sym, cond2_dir, int_term):
    """Branches of the copula results that are sound by sign analysis.

    Both T4.1 and T4.2 decompose the gap as
    ``int_0^{1/2} w(u) [q(u) - q(1-u)] du + 2 int_0^{1/2} q(1-u) delta(u) du``
    where ``w >= 0`` is exactly the ">=" reading of the second condition.
    """
    i_pos, i_neg = int_term >= -MEASURE_TOL, int_term <= MEASURE_TOL
    ge, le = reading_holds(cond2_dir, "ge"), reading_holds(cond2_dir, "le")
    return {
        ("A2.3", "ge", "min"): sym["A2.3"] and ge and i_pos,
        ("A2.4", "le", "min"): sym["A2.4"] and le and i_pos,
        ("A2.3", "le", "max"): sym["A2.3"] and le and i_neg,
        ("A2.4", "ge", "max"): sym["A2.4"] and ge and i_neg,
    }


def _copula_gap_check(theorem, d, f, alphas, copula, thetas, parts, conclusion, gap_name):
    """Shared body of T4.1 and T4.2.

    ``parts(theta, alpha, u)`` returns ``(cond2_lhs, cond2_rhs, delta, w)``
    for the decomposition; ``conclusion(theta, alpha)`` returns
    ``(reference, value)`` where the "min" conclusion reads ``value <= reference``.
    """
    sym, symrep = _symmetry_reading(d)
    u = grid_half()
    directions, violations = [], []
    terms, details, implied, oks = {}, {"A2.3": sym["A2.3"], "A2.4": sym["A2.4"]}, [], []
    worst_residual = 0.0
    for t in thetas:
        copula.check_theta(t)
        for a in alphas:
            f.check_alpha(a)
            lhs, rhs, _, _ = parts(t, a, u)
            direction, viol = compare_on_grid(u, lhs, rhs, GRID_TOL)
            directions.append(direction)
            violations += viol
            delta_int = _half_integral(lambda x: _q_mirror(d, x) * parts(t, a, x)[2])
            w_int = _half_integral(lambda x: parts(t, a, x)[3] * (_q(d, x) - _q_mirror(d, x)))
            key = f"theta={t:g},alpha={a:g}"
            terms[f"int q(1-u) delta [{key}]"] = delta_int
            reference, value = conclusion(t, a)
            # the decomposition is an identity; record how well it holds
            worst_residual = max(worst_residual, abs((reference - value) - (w_int + 2.0 * delta_int)))
            fired = _pairings(sym, direction, delta_int)
            details[f"pairings [{key}]"] = {f"{s}+cond2 {r} -> {k}": v for (s, r, k), v in fired.items()}
            for (s, r, kind), on in fired.items():
                if not on:
                    continue
                if kind == "min":
                    implied.append(f"{gap_name} >= 0 at {key} ({s}, cond2 {r})")
                    oks.append(value <= reference + MEASURE_TOL)
                else:
                    implied.append(f"{gap_name} <= 0 at {key} ({s}, cond2 {r})")
                    oks.append(value >= reference - MEASURE_TOL)
    details["decomposition_residual"] = worst_residual
    return ConditionReport(
        theorem_id=theorem,
        direction=_combine(directions),
        pointwise_violations=violations,
        integral_terms=terms,
        implied_conclusion="; ".join(implied) or "none",
        conclusion_verified=_verdict(oks),
        details=details,
    )


def _t41(d, f, alphas, copula, thetas, **_):
    if f.alpha_identity is None:
        raise MissingContext("T4.1 needs a family with an identity parameter")
    C = copula.c

    def parts(t, a, u):
        ub = 1.0 - u
        h, hb = f.value(a, u), f.value(a, ub)
        lhs = C(t, u, h) - C(t, u, u)
        rhs = 0.5 * (h - u)
        delta = C(t, u, h) + C(t, ub, hb) - (C(t, u, u) + C(t, ub, ub)) - 0.5 * (h + hb - 1.0)
        s = u - h + 2.0 * (C(t, u, h) - C(t, u, u))
        return lhs, rhs, delta, s

    def conclusion(t, a):
        return nu_at_identity(d, copula, t), nu(d, f, a, copula, t).value

    return _copula_gap_check("T4.1", d, f, alphas, copula, thetas, parts, conclusion,
                             "nu(alpha_I) - nu(alpha)")


def _t42(d, f, alphas, copula, thetas, **_):
    C = copula.c
    em = mean_minus_lower(d).value

    def parts(t, a, u):
        ub = 1.0 - u
        h, hb = f.value(a, u), f.value(a, ub)
        lhs = C(t, u, h)
        rhs = 0.5 * h
        delta = C(t, u, h) + C(t, ub, hb) - 0.5 * (h + hb)
        b = 2.0 * C(t, u, h) - h
        return lhs, rhs, delta, b

    def conclusion(t, a):
        return em, nu(d, f, a, copula, t).value

    return _copula_gap_check("T4.2", d, f, alphas, copula, thetas, parts, conclusion,
                             "E(X) - l - nu(alpha)")


def _t43(d, f, copula, thetas, **_):
    if f.alpha_identity is None:
        raise MissingContext("T4.3 needs a family with an identity parameter")
    u = grid_half()
    lhs3, rhs3 = _identity_sides(d, f, u)
    cond3, violations = compare_on_grid(u, lhs3, rhs3, GRID_TOL)
    cond2_dirs, terms, implied, oks = [], {}, [], []
    sym_max = 0.0
    for t in thetas:
        copula.check_theta(t)
        diag = copula.d2(t, u, u)
        sym_max = max(sym_max, float(np.max(np.abs(diag + copula.d2(t, 1.0 - u, 1.0 - u) - 1.0))))
        cond2, viol = compare_on_grid(u, diag, 0.5, GRID_TOL)
        cond2_dirs.append(cond2)
        violations += viol
        limit = limit_dnu(d, f, copula, t)
        key = f"theta={t:g}"
        terms[f"lim dnu/dalpha [{key}]"] = limit
        if f.contains(f.alpha_identity):
            terms[f"dnu/dalpha at identity [{key}]"] = nu_dalpha(d, f, f.alpha_identity, copula, t)
        # [1 - 2 d2C] >= 0 is the "le" reading of cond2
        for r2, r3, kind in (("le", "le", "min"), ("ge", "ge", "min"),
                             ("le", "ge", "max"), ("ge", "le", "max")):
            if reading_holds(cond2, r2) and reading_holds(cond3, r3):
                if kind == "min":
                    implied.append(f"lim dnu/dalpha <= 0 at {key}")
                    oks.append(limit <= MEASURE_TOL)
                else:
                    implied.append(f"lim dnu/dalpha >= 0 at {key}")
                    oks.append(limit >= -MEASURE_TOL)
    cond1 = sym_max <= 1e-12
    if not cond1:
        implied, oks = [], []
    return ConditionReport(
        theorem_id="T4.3",
        direction=_combine(cond2_dirs),
        pointwise_violations=violations,
        integral_terms=terms,
        implied_conclusion="; ".join(dict.fromkeys(implied)) or "none",
        conclusion_verified=_verdict(oks),
        details={"diagonal_symmetry": cond1, "diagonal_symmetry_max_error": sym_max,
                 "cond3_direction": cond3},
    )


def _t44(d, f, copula, thetas, **_):
    sym, symrep = _symmetry_reading(d)
    # u = (1 + v)/2 maps (0, 1) onto (1/2, 1); 4u - 3 = 2v - 1
    integral = integrate_01(
        lambda v, vb: 0.5 * d.dqdf(0.5 + 0.5 * v, 0.5 * vb) * (v - vb),
        complement=True,
    ).value
    limits_ok = identity_limit_holds(f) and degenerate_limit_holds(f)
    em = mean_minus_lower(d).value
    terms = {"int_{1/2}^1 q(u)(4u-3)": integral, "E(X)-l": em}
    fired = sym["A2.4"] and integral >= -MEASURE_TOL and limits_ok
    oks, implied = [], []
    for t in thetas:
        value = nu_at_identity(d, copula, t)
        terms[f"nu(theta={t:g}, alpha_I)"] = value
        if fired:
            implied.append(f"nu(theta={t:g}, alpha_I) <= E(X)-l")
            oks.append(value <= em + MEASURE_TOL)
    return ConditionReport(
        theorem_id="T4.4",
        direction=symrep.direction,
        pointwise_violations=symrep.pointwise_violations,
        integral_terms=terms,
        implied_conclusion="; ".join(implied) or "none",
        conclusion_verified=_verdict(oks),
        details={"A2.4": sym["A2.4"], "limits_ok": limits_ok, "fired": fired},
    )


def _assumption(theorem, d):
    rep = dqdf_symmetry(d)
    rep.theorem_id = theorem
    if theorem == "A2.3":
        holds = reading_holds(rep.direction, "ge")
        # DFR implies A2.3; re-checked whenever the law is DFR
        dfr = rep.details["aging"].dfr in ("holds", "boundary")
        rep.implied_conclusion = "DFR implies A2.3" if dfr else "none"
        rep.conclusion_verified = ("holds" if holds else "fails") if dfr else "untested"
    else:
        holds = reading_holds(rep.direction, "le")
    rep.details["assumption_holds"] = holds
    return rep


def check(theorem_id: str, d: ContinuousDistribution, f: DistortionFamily | None = None,
          alpha=None, copula: SurvivalCopulaFamily | None = None, theta=None) -> ConditionReport:
    """Evaluate one theorem's hypotheses and re-verify its conclusion.

    ``alpha`` and ``theta`` may be scalars or sequences. A missing ``theta``
    with a copula scans a 21-point grid over the copula's parameter range.
    """
    tid = theorem_id.strip().upper()
    if tid not in THEOREM_IDS:
        raise MissingContext(f"unknown theorem id {theorem_id!r}; choose from {THEOREM_IDS}")
    if tid in ("A2.3", "A2.4"):
        return _assumption(tid, d)
    _require("a distortion family", f, tid)
    alphas = _as_list(alpha)
    if tid in ("T3.1", "T3.2", "T4.1", "T4.2"):
        _require("alpha", alphas, tid)
    if tid.startswith("T4"):
        _require("a copula", copula, tid)
        thetas = _thetas(copula, theta)
    else:
        thetas = []
    dispatch = {"T3.1": _t31, "T3.2": _t32, "T3.3": _t33, "T3.4": _t34,
                "T4.1": _t41, "T4.2": _t42, "T4.3": _t43, "T4.4": _t44}
    return dispatch[tid](d=d, f=f, alphas=alphas, copula=copula, thetas=thetas)


def audit(contexts) -> list:
    """Run every applicable check over ``contexts``.

    ``contexts`` is an iterable of dicts with keys ``d``, ``f``, ``alpha``,
    ``copula``, ``theta``. Returns ``(theorem_id, context, report)`` rows;
    a report with ``conclusion_verified == "fails"`` is a soundness failure.
    """
    rows = []
    for ctx in contexts:
        for tid in THEOREM_IDS:
            try:
                rep = check(tid, **ctx)
            except MissingContext:
                continue
            rows.append((tid, ctx, rep))
    return rows
