"""Adaptive integration on the unit interval.

Every measure in the package reduces to an integral over ``(0, 1)`` in the
survival-probability variable ``u``. Those integrands routinely blow up at an
endpoint (``1/u`` for the exponential law, ``(1-u)**-0.5`` for the power law),
so the engine here never evaluates at ``0`` or ``1``:

* the variable is first changed by the smoothstep map
  ``u = 3 t**2 - 2 t**3`` whose Jacobian ``6 t (1 - t)`` vanishes at both
  ends and damps power-type endpoint singularities;
* the ``t`` interval is then bisected adaptively, each panel integrated with
  the 15-point Kronrod rule and its embedded 7-point Gauss rule. Both rules
  use interior nodes only.

Panel errors use the QUADPACK ``qk15`` heuristic. Panels are refined worst-first using a
heap with a monotone counter as tie breaker, so results are bit-for-bit
reproducible.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MaxSubdivisions, NonFinite

__all__ = [
    "QuadratureResult",
    "integrate_01",
    "integrate_interval",
    "DEFAULT_ABS_TOL",
    "DEFAULT_REL_TOL",
]

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-9
DEFAULT_MAX_PANELS = 2000

# Kronrod abscissae on [-1, 1] (non-negative half) and weights; the Gauss
# 7-point rule uses the odd-indexed Kronrod nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-node layout: -x0..-x6, 0, x6..x0.
NODES = np.concatenate([-_XK[:-1], [0.0], _XK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], [_WK[-1]], _WK[-2::-1]])
GAUSS_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_i] = _w
    GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions: int
    converged: bool

    def __float__(self):
        return self.value


def _smoothstep(x):
    return x * x * (3.0 - 2.0 * x), 6.0 * x * (1.0 - x)


_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


def _qk15_error(y, half, kron, gauss):
    # QUADPACK qk15 heuristic: inflates |K-G| on rough panels, deflates on smooth ones
    mean = (y @ KRONROD_WEIGHTS) * 0.5
    resabs = np.abs(half) * (np.abs(y) @ KRONROD_WEIGHTS)
    resasc = np.abs(half) * (np.abs(y - mean[:, None]) @ KRONROD_WEIGHTS)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    return np.where(resabs > _TINY / (50.0 * _EPS), np.maximum(floor, err), err)


def _panel_nodes(a, b):
    half = 0.5 * (b - a)
    return (0.5 * (a + b))[:, None] + half[:, None] * NODES[None, :], half


def integrate_01(
    f: Callable[[np.ndarray], np.ndarray],
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
    transform: bool = True,
    raise_on_failure: bool = True,
    complement: bool = False,
) -> QuadratureResult:
    """Integrate ``f`` over ``(0, 1)``.

    Parameters
    ----------
    f : callable
        Vectorised integrand: receives a 1-d float array of nodes strictly
        inside ``(0, 1)`` and returns an array of the same shape.
    abs_tol, rel_tol : float
        Stop once the summed error estimate is at most
        ``max(abs_tol, rel_tol * |value|)``.
    max_panels : int
        Panel budget. Exhausting it raises :class:`MaxSubdivisions`
        (or returns an unconverged result if ``raise_on_failure`` is false).
    transform : bool
        Apply the smoothstep endpoint substitution (default). Disable only to
        integrate a function that is already smooth at both ends.
    complement : bool
        Call ``f(u, 1 - u)`` with the complement computed without
        cancellation. Integrands singular at ``u = 1`` need this, because
        ``u`` itself rounds to ``1.0`` long before the singularity is resolved.

    Returns
    -------
    QuadratureResult
    """
    # Each half of (0, 1) is parametrised by the distance x in [0, 1/2] to its
    # own endpoint, so nodes next to u = 1 keep full relative precision.
    def g(x, right):
        if transform:
            m, jac = _smoothstep(x)
        else:
            m, jac = x, 1.0
        u = np.where(right, 1.0 - m, m)
        ubar = np.where(right, m, 1.0 - m)
        y = f(u, ubar) if complement else f(u)
        return np.asarray(y, dtype=float) * jac, u

    def evaluate(a, b, right):
        x, half = _panel_nodes(a, b)
        side = np.broadcast_to(right[:, None], x.shape)
        y, u = g(x.ravel(), side.ravel())
        y = y.reshape(x.shape)
        if not np.all(np.isfinite(y)):
            bad = u.reshape(x.shape)[~np.isfinite(y)][0]
            raise NonFinite(f"integrand is not finite at u={float(bad)!r}")
        kron = half * (y @ KRONROD_WEIGHTS)
        gauss = half * (y @ GAUSS_WEIGHTS)
        return kron, _qk15_error(y, half, kron, gauss)

    vals, errs = evaluate(np.zeros(2), np.full(2, 0.5), np.array([False, True]))

    heap = []
    panels = {}
    for key in range(2):
        panels[key] = (0.0, 0.5, key == 1, float(vals[key]), float(errs[key]))
        heapq.heappush(heap, (-float(errs[key]), key))
    counter = 2
    frozen = {}
    total = float(np.sum(vals))
    total_err = float(np.sum(errs))

    def exact_totals():
        items = list(panels.values()) + list(frozen.values())
        return math.fsum(p[3] for p in items), math.fsum(p[4] for p in items)

    converged = False
    while True:
        if total_err <= max(abs_tol, rel_tol * abs(total)):
            total, total_err = exact_totals()
            if total_err <= max(abs_tol, rel_tol * abs(total)):
                converged = True
                break
        if not heap or len(panels) + len(frozen) >= max_panels:
            break
        _, key = heapq.heappop(heap)
        a, b, right, v, e = panels.pop(key)
        mid = 0.5 * (a + b)
        if not (a < mid < b) or (b - a) <= 8.0 * _EPS * b:
            # too narrow to split; keep its contribution as-is
            frozen[key] = (a, b, right, v, e)
            continue
        cv, ce = evaluate(np.array([a, mid]), np.array([mid, b]), np.array([right, right]))
        for lo, hi, pv, pe in ((a, mid, cv[0], ce[0]), (mid, b, cv[1], ce[1])):
            panels[counter] = (lo, hi, right, float(pv), float(pe))
            heapq.heappush(heap, (-float(pe), counter))
            counter += 1
        total += float(cv[0] + cv[1]) - v
        total_err += float(ce[0] + ce[1]) - e

    total, total_err = exact_totals()
    result = QuadratureResult(
        value=total,
        error_estimate=total_err,
        subdivisions=len(panels) + len(frozen),
        converged=converged,
    )
    if not converged and raise_on_failure:
        raise MaxSubdivisions(
            f"quadrature stopped at {result.subdivisions} panels with error "
            f"estimate {total_err:.3g} (value {total:.12g})",
            result,
        )
    return result


def integrate_interval(f, a, b, **kwargs) -> QuadratureResult:
    """Integrate ``f`` over a finite interval ``(a, b)`` by an affine map."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_interval needs finite limits")
    width = b - a

    def g(u):
        return width * f(a + width * u)

    return integrate_01(g, **kwargs)
