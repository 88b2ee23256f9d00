"""Locating extrema of ``alpha -> eta(alpha)`` and ``alpha -> nu(theta, alpha)``.

The search is derivative-free: a uniform scan brackets every discrete local
extremum, then golden-section search refines each bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DistGiniError, Nonconvergence, WindowOutsideInterval

__all__ = ["ExtremumResult", "ScanRow", "find_extremum", "find_extrema", "golden_section", "scan"]

SCAN_POINTS = 200
X_TOL = 1e-6
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ExtremumResult:
    alpha_star: float
    value: float
    kind: str  # "minimum", "maximum" or "none-in-window"
    bracket: tuple[float, float]
    evaluations: int


def golden_section(g: Callable[[float], float], lo: float, hi: float,
                   xtol: float = X_TOL, max_iter: int = 200):
    """Minimise unimodal ``g`` on ``[lo, hi]``; returns ``(x, g(x), evaluations)``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    evals = 2
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)
        evals += 1
    else:
        raise Nonconvergence(f"golden section did not reach xtol={xtol} in {max_iter} steps")
    x, gx = (c, gc) if gc <= gd else (d, gd)
    return x, gx, evals


def _check_window(window, interval):
    lo, hi = window
    if not (lo < hi):
        raise WindowOutsideInterval(f"empty window {window!r}")
    if interval is not None:
        a, b = interval
        # parameter intervals are open
        if lo <= a or hi >= b:
            raise WindowOutsideInterval(f"window {window!r} not inside parameter interval {interval!r}")


def _refine(objective, grid, values, i, kind, xtol):
    sign = 1.0 if kind == "minimum" else -1.0
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    x, gx, evals = golden_section(lambda a: sign * objective(a), lo, hi, xtol)
    # never report worse than the best scanned point
    if sign * gx > sign * values[i]:
        x, gx = grid[i], sign * values[i]
    return ExtremumResult(float(x), float(sign * gx), kind, (float(lo), float(hi)), evals)


def find_extrema(objective: Callable[[float], float], window: tuple[float, float],
                 interval: Optional[tuple[float, float]] = None,
                 n_scan: int = SCAN_POINTS, xtol: float = X_TOL) -> list:
    """Every interior local extremum visible on an ``n_scan``-point scan."""
    _check_window(window, interval)
    grid = np.linspace(window[0], window[1], n_scan)
    values = np.array([objective(float(a)) for a in grid])
    diffs = np.diff(values)
    found = []
    for i in range(1, n_scan - 1):
        if diffs[i - 1] < 0 and diffs[i] >= 0:
            found.append(_refine(objective, grid, values, i, "minimum", xtol))
        elif diffs[i - 1] > 0 and diffs[i] <= 0:
            found.append(_refine(objective, grid, values, i, "maximum", xtol))
    return [
        ExtremumResult(r.alpha_star, r.value, r.kind, r.bracket, r.evaluations + n_scan)
        for r in found
    ]


def find_extremum(objective: Callable[[float], float], window: tuple[float, float],
                  kind_hint: Optional[str] = None,
                  interval: Optional[tuple[float, float]] = None,
                  n_scan: int = SCAN_POINTS, xtol: float = X_TOL) -> ExtremumResult:
    """Best interior extremum of ``objective`` on ``window``.

    With ``kind_hint`` (``"minimum"`` or ``"maximum"``) only that kind is
    considered; otherwise the candidate that departs furthest from the
    window endpoint values wins. A candidate is accepted only if it is no
    worse than both endpoint values (slack 1e-10).
    """
    found = find_extrema(objective, window, interval, n_scan, xtol)
    ends = (objective(window[0]), objective(window[1]))
    best, best_gap = None, -math.inf
    for r in found:
        if kind_hint is not None and r.kind != kind_hint:
            continue
        gap = (min(ends) - r.value) if r.kind == "minimum" else (r.value - max(ends))
        if gap >= -1e-10 and gap > best_gap:
            best, best_gap = r, gap
    if best is None:
        return ExtremumResult(math.nan, math.nan, "none-in-window", tuple(map(float, window)),
                              n_scan + 2)
    return ExtremumResult(best.alpha_star, best.value, best.kind, best.bracket,
                          best.evaluations + 2)


@dataclass(frozen=True)
class ScanRow:
    theta: Optional[float]
    alpha: float
    value: float
    err_estimate: float
    converged: bool
    error: Optional[str] = None


def scan(objective: Callable, alpha_grid: Sequence[float],
         theta_grid: Optional[Sequence[float]] = None) -> list:
    """Dense evaluation table, theta-major.

    ``objective(alpha)`` or ``objective(theta, alpha)`` may return a float
    or anything with ``value`` and ``quadrature`` attributes. Evaluation
    errors are caught per cell and recorded in ``error`` with a NaN value.
    """
    rows = []
    thetas = [None] if theta_grid is None else [float(t) for t in theta_grid]
    for t in thetas:
        for a in alpha_grid:
            a = float(a)
            try:
                res = objective(a) if t is None else objective(t, a)
            except DistGiniError as exc:
                rows.append(ScanRow(t, a, math.nan, math.nan, False, f"{type(exc).__name__}: {exc}"))
                continue
            if hasattr(res, "quadrature"):
                q = res.quadrature
                rows.append(ScanRow(t, a, float(res.value), q.error_estimate, q.converged))
            else:
                rows.append(ScanRow(t, a, float(res), 0.0, True))
    return rows
