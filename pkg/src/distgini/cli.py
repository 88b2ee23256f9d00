"""Command-line front end.

Subcommands: ``eval``, ``scan``, ``extrema``, ``check``, ``mc``, ``figures``.
Exit status 0 on success, 2 on configuration or parameter errors, 3 on
numerical failure. Values in ``--config`` files override command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import conditions, copulas, distortions, distributions, extrema, measures, montecarlo, plots
from .config import Range, RunConfig, parse_config, parse_range, parse_value
from .errors import ConfigError, DistGiniError, MissingContext, NumericalError
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL

__all__ = ["main", "run", "write_csv", "figures"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
CSV_HEADER = ("theta", "alpha", "value", "err_estimate", "converged")

FIG_ALPHA = Range(0.1, 10.0, 0.1)
FIG_THETA = Range(-1.0, 1.0, 0.1)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


# -- model assembly ----------------------------------------------------------

class Model:
    def __init__(self, cfg: RunConfig, need_distortion=True):
        if not cfg.dist:
            raise ConfigError("no distribution given (--dist)")
        if need_distortion and not cfg.distortion:
            raise ConfigError("no distortion given (--distortion)")
        self.d = distributions.parse_distribution(cfg.dist)
        self.f = distortions.parse_distortion(cfg.distortion, self.d) if cfg.distortion else None
        self.c = copulas.make_copula(cfg.copula) if cfg.copula else None
        self.abs_tol = cfg.abs_tol if cfg.abs_tol is not None else DEFAULT_ABS_TOL
        self.rel_tol = cfg.rel_tol if cfg.rel_tol is not None else DEFAULT_REL_TOL

    def theta_or_default(self, theta):
        if theta is not None:
            return float(theta)
        return float(self.c.theta_independence if self.c.theta_independence is not None
                     else self.c.theta_interval[0])

    def measure(self, alpha, theta=None):
        if self.c is None:
            return measures.eta(self.d, self.f, alpha, self.abs_tol, self.rel_tol)
        return measures.nu(self.d, self.f, alpha, self.c, self.theta_or_default(theta),
                           self.abs_tol, self.rel_tol)


def _scalar(value, name):
    if value is None:
        raise ConfigError(f"no {name} given (--{name})")
    if isinstance(value, Range):
        raise ConfigError(f"{name} must be a single value here, got a range")
    return float(value)


def _grid(value, name):
    if value is None:
        return None
    if isinstance(value, Range):
        return [float(v) for v in value.points()]
    return [float(value)]


# -- output ------------------------------------------------------------------

def write_csv(rows, stream, with_theta: bool):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER if with_theta else CSV_HEADER[1:])
    for r in rows:
        cells = [fmt(r.alpha), fmt(r.value), fmt(r.err_estimate), fmt(r.converged)]
        if with_theta:
            cells.insert(0, fmt(r.theta))
        w.writerow(cells)


def _emit(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _svg_for(rows, with_theta, title):
    if not with_theta:
        return plots.line_plot([(title, [r.alpha for r in rows], [r.value for r in rows])], title)
    thetas = sorted({r.theta for r in rows})
    alphas = sorted({r.alpha for r in rows})
    table = {(r.theta, r.alpha): r.value for r in rows}
    values = [[table[(t, a)] for a in alphas] for t in thetas]
    return plots.heatmap(thetas, alphas, values, title)


# -- subcommands -------------------------------------------------------------

def cmd_eval(cfg: RunConfig, out):
    m = Model(cfg)
    alpha = _scalar(cfg.alpha, "alpha")
    res = m.measure(alpha, None if cfg.theta is None else _scalar(cfg.theta, "theta"))
    name = "nu" if m.c is not None else "eta"
    out.write(f"measure: {name}\n")
    for k, v in res.inputs.items():
        out.write(f"{k}: {v if isinstance(v, str) else fmt(v)}\n")
    out.write(f"value: {fmt(res.value)}\n")
    out.write(f"err_estimate: {fmt(res.quadrature.error_estimate)}\n")
    out.write(f"converged: {res.quadrature.converged}\n")
    return EXIT_OK


def cmd_scan(cfg: RunConfig, out):
    m = Model(cfg)
    if not isinstance(cfg.alpha, Range):
        raise ConfigError("scan needs an alpha range start:stop:step")
    alphas = _grid(cfg.alpha, "alpha")
    thetas = _grid(cfg.theta, "theta") if m.c is not None else None
    if thetas is not None:
        rows = extrema.scan(lambda t, a: m.measure(a, t), alphas, thetas)
    else:
        rows = extrema.scan(lambda a: m.measure(a), alphas)
    failures = [r for r in rows if r.error]
    buf = io.StringIO()
    write_csv(rows, buf, thetas is not None)
    if cfg.out:
        _emit(cfg.out, buf.getvalue())
    else:
        out.write(buf.getvalue())
    if cfg.svg:
        _emit(cfg.svg, _svg_for(rows, thetas is not None, f"{m.d.label} / {m.f.label}"))
    for r in failures:
        sys.stderr.write(f"theta={r.theta} alpha={fmt(r.alpha)}: {r.error}\n")
    return EXIT_NUMERIC if failures else EXIT_OK


def cmd_extrema(cfg: RunConfig, out):
    m = Model(cfg)
    window = cfg.window or Range(0.1, 10.0)
    theta = None if cfg.theta is None else _scalar(cfg.theta, "theta")
    res = extrema.find_extremum(lambda a: m.measure(a, theta).value,
                                (window.start, window.stop), kind_hint=cfg.kind,
                                interval=m.f.alpha_interval)
    out.write(f"alpha_star: {fmt(res.alpha_star)}\n")
    out.write(f"value: {fmt(res.value)}\n")
    out.write(f"kind: {res.kind}\n")
    out.write(f"bracket: {fmt(res.bracket[0])}:{fmt(res.bracket[1])}\n")
    out.write(f"evaluations: {res.evaluations}\n")
    if res.kind != "none-in-window":
        if m.c is None:
            slope = measures.eta_dalpha(m.d, m.f, res.alpha_star)
        else:
            slope = measures.nu_dalpha(m.d, m.f, res.alpha_star, m.c, m.theta_or_default(theta))
        out.write(f"derivative_at_alpha_star: {fmt(slope)}\n")
    return EXIT_OK


def cmd_check(cfg: RunConfig, out, theorem: str, csv_path=None):
    m = Model(cfg, need_distortion=False)
    ids = conditions.THEOREM_IDS if theorem.lower() == "all" else (theorem,)
    alpha = _grid(cfg.alpha, "alpha")
    theta = _grid(cfg.theta, "theta")
    csv_parts = []
    for tid in ids:
        try:
            rep = conditions.check(tid, m.d, m.f, alpha=alpha, copula=m.c, theta=theta)
        except MissingContext as exc:
            if len(ids) == 1:
                raise ConfigError(str(exc)) from None
            out.write(f"theorem: {tid}\nskipped: {exc}\n\n")
            continue
        out.write(rep.to_text() + "\n\n")
        csv_parts.append(rep.to_csv() if not csv_parts else rep.to_csv().split("\n", 1)[1])
    if csv_path:
        _emit(csv_path, "".join(csv_parts) or "theorem,reading,u,lhs,rhs\n")
    return EXIT_OK


def cmd_mc(cfg: RunConfig, out):
    m = Model(cfg)
    alpha = _scalar(cfg.alpha, "alpha")
    c = m.c or copulas.make_copula("independence")
    theta = m.theta_or_default(None if cfg.theta is None else _scalar(cfg.theta, "theta")) \
        if m.c is not None else 0.0
    n = cfg.n if cfg.n is not None else 1_000_000
    seed = cfg.seed if cfg.seed is not None else 0
    workers = cfg.threads if cfg.threads is not None else int(os.environ.get("DISTGINI_THREADS", "1") or 1)
    est = montecarlo.estimate_nu(m.d, m.f, alpha, c, theta, n=n, seed=seed, workers=workers)
    quad = measures.nu(m.d, m.f, alpha, c, theta, m.abs_tol, m.rel_tol).value
    out.write(f"mean: {fmt(est.mean)}\n")
    out.write(f"std_error: {fmt(est.std_error)}\n")
    out.write(f"n: {est.n}\n")
    out.write(f"seed: {est.seed}\n")
    out.write(f"quadrature: {fmt(quad)}\n")
    out.write(f"z_score: {fmt((est.mean - quad) / est.std_error)}\n")
    return EXIT_OK


# -- figures -----------------------------------------------------------------

def _surface(d, f, c, alphas, thetas):
    return extrema.scan(lambda t, a: measures.nu(d, f, a, c, t), alphas, thetas)


def _curve(d, f, alphas):
    return extrema.scan(lambda a: measures.eta(d, f, a), alphas)


def figures(outdir) -> list:
    """Regenerate the figure data and plots; returns the written paths.

    * ``fig1_eta``: eta for exp(1) under proportional hazards
    * ``fig1``: nu surface for exp(1), proportional hazards, FGM
    * ``fig2`` / ``fig2_exp``: eta for uniform(0,1) / exp(1) under the
      additive hazard model with ``K = t^2/2``
    * ``fig3``: nu surface for powerlaw(2), proportional reversed hazards, FGM
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    alphas = [float(a) for a in FIG_ALPHA.points()]
    thetas = [float(t) for t in FIG_THETA.points()]
    fgm = copulas.make_copula("fgm")
    exp1 = distributions.exponential(1.0)
    unif = distributions.uniform(0.0, 1.0)
    plaw = distributions.powerlaw(2.0)
    ph, prh = distortions.make_family("ph"), distortions.make_family("prh")

    jobs = [
        ("fig1_eta", _curve(exp1, ph, alphas), False, "eta: exp(1), ph"),
        ("fig1", _surface(exp1, ph, fgm, alphas, thetas), True, "nu: exp(1), ph, fgm"),
        ("fig2", _curve(unif, distortions.make_family("gah", unif, "t^2/2"), alphas), False,
         "eta: uniform(0,1), gah K=t^2/2"),
        ("fig2_exp", _curve(exp1, distortions.make_family("gah", exp1, "t^2/2"), alphas), False,
         "eta: exp(1), gah K=t^2/2"),
        ("fig3", _surface(plaw, prh, fgm, alphas, thetas), True, "nu: powerlaw(2), prh, fgm"),
    ]
    written = []
    for name, rows, with_theta, title in jobs:
        buf = io.StringIO()
        write_csv(rows, buf, with_theta)
        csv_path, svg_path = outdir / f"{name}.csv", outdir / f"{name}.svg"
        csv_path.write_text(buf.getvalue())
        svg_path.write_text(_svg_for(rows, with_theta, title))
        written += [csv_path, svg_path]
    return written


def cmd_figures(cfg: RunConfig, out):
    paths = figures(cfg.out or "figures")
    for p in paths:
        out.write(f"{p}\n")
    return EXIT_OK


# -- argument handling -------------------------------------------------------

def _flag_value(key):
    def convert(text):
        try:
            return parse_value(key, text)
        except ConfigError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return convert


def _window(text):
    try:
        return parse_range(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; its values override flags")
    common.add_argument("--dist", help='base law, e.g. "exp(1)", "uniform(0,1)", "weibull(2,1)", "powerlaw(2)"')
    common.add_argument("--distortion", help='ph | prh | pow | "gah:K=t^2/2"')
    common.add_argument("--copula", help="independence | fgm")
    common.add_argument("--alpha", type=_flag_value("alpha"), help="value or start:stop:step")
    common.add_argument("--theta", type=_flag_value("theta"), help="value or start:stop:step")
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)

    p = argparse.ArgumentParser(prog="distgini", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="evaluate eta or nu at one alpha")
    s = sub.add_parser("scan", parents=[common], help="tabulate over an alpha (and theta) grid")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--svg", help="optional SVG path")
    s = sub.add_parser("extrema", parents=[common], help="locate an extremum over alpha")
    s.add_argument("--window", type=_window, help="lo:hi (default 0.1:10)")
    s.add_argument("--kind", choices=("minimum", "maximum"))
    s = sub.add_parser("check", parents=[common], help="check sufficient conditions")
    s.add_argument("theorem", help=f"one of {', '.join(conditions.THEOREM_IDS)} or 'all'")
    s.add_argument("--csv", help="write pointwise violations here")
    s = sub.add_parser("mc", parents=[common], help="Monte Carlo estimate of nu")
    s.add_argument("--n", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--threads", type=int, help="worker threads (default $DISTGINI_THREADS or 1)")
    s = sub.add_parser("figures", parents=[common], help="regenerate figure CSV/SVG files")
    s.add_argument("--out", help="output directory (default ./figures)")
    return p


def _config_from_args(ns) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    values = {k: getattr(ns, k) for k in keys if getattr(ns, k, None) is not None}
    cfg = RunConfig(**values)
    if ns.config:
        try:
            text = Path(ns.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {ns.config!r}: {exc.strerror}") from None
        cfg = cfg.merged(parse_config(text))
    return cfg


def _glue_negative(argv):
    # argparse reads "-1:1:0.1" as an option; attach it to its flag instead
    argv, glued = list(argv), []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok.startswith("--") and "=" not in tok and nxt[:1] == "-" and nxt[1:2] in set("0123456789."):
            glued.append(f"{tok}={nxt}")
            i += 2
        else:
            glued.append(tok)
            i += 1
    return glued


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    ns = parser.parse_args(_glue_negative(sys.argv[1:] if argv is None else argv))
    try:
        cfg = _config_from_args(ns)
        if ns.command == "eval":
            return cmd_eval(cfg, out)
        if ns.command == "scan":
            return cmd_scan(cfg, out)
        if ns.command == "extrema":
            return cmd_extrema(cfg, out)
        if ns.command == "check":
            return cmd_check(cfg, out, ns.theorem, ns.csv)
        if ns.command == "mc":
            return cmd_mc(cfg, out)
        return cmd_figures(cfg, out)
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except DistGiniError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_CONFIG


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
