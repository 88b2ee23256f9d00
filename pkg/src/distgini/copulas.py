"""Survival copulas linking ``X`` to its distorted version ``X_alpha``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidFamilyId, NoRoot, ThetaOutOfRange
from .report import ConditionReport, compare_on_grid

__all__ = [
    "SurvivalCopulaFamily",
    "make_copula",
    "diagonal_bound_check",
    "conditional_inverse",
    "validate_copula",
    "COPULA_IDS",
]

COPULA_IDS = ("independence", "fgm")
_FLAT = 1e-12


@dataclass(frozen=True)
class SurvivalCopulaFamily:
    """A one-parameter copula family ``c(theta, u, v)``.

    ``d1`` and ``d2`` are the partial derivatives in the first and second
    argument. ``inverse_d1`` (optional) solves ``d1(theta, u, v) = w`` for
    ``v``; without it :func:`conditional_inverse` bisects.
    """

    c: Callable
    d1: Callable
    d2: Callable
    theta_interval: tuple[float, float]
    label: str
    theta_independence: Optional[float] = None
    inverse_d1: Optional[Callable] = None

    def check_theta(self, theta):
        lo, hi = self.theta_interval
        if theta is None or not math.isfinite(theta) or not (lo <= theta <= hi):
            raise ThetaOutOfRange(f"theta={theta!r} outside {self.label} range [{lo}, {hi}]")

    def theta_grid(self, n=21):
        lo, hi = self.theta_interval
        return np.linspace(lo, hi, n) if hi > lo else np.array([lo])


def _independence():
    return SurvivalCopulaFamily(
        c=lambda t, u, v: np.asarray(u) * np.asarray(v),
        d1=lambda t, u, v: np.broadcast_to(np.asarray(v, dtype=float), np.broadcast(u, v).shape) * 1.0,
        d2=lambda t, u, v: np.broadcast_to(np.asarray(u, dtype=float), np.broadcast(u, v).shape) * 1.0,
        theta_interval=(0.0, 0.0),
        theta_independence=0.0,
        inverse_d1=lambda t, u, w: np.broadcast_to(np.asarray(w, dtype=float), np.broadcast(u, w).shape) * 1.0,
        label="independence",
    )


def _fgm_inverse(t, u, w):
    # d1 = v + a v (1 - v), a = t (1 - 2u): solve a v^2 - (1 + a) v + w = 0.
    # The root in [0, 1] is written in the cancellation-free form.
    u, w = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(w, dtype=float))
    a = t * (1.0 - 2.0 * u)
    b = 1.0 + a
    disc = np.maximum(b * b - 4.0 * a * w, 0.0)
    denom = b + np.sqrt(disc)
    # denom vanishes only for a = -1, w = 0, where the root is v = 0
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(denom > 0, 2.0 * w / denom, 0.0)
    return np.where(np.abs(a) < _FLAT, w, v)


def _fgm():
    return SurvivalCopulaFamily(
        c=lambda t, u, v: u * v * (1.0 + t * (1.0 - u) * (1.0 - v)),
        d1=lambda t, u, v: v + t * (1.0 - 2.0 * u) * v * (1.0 - v),
        d2=lambda t, u, v: u + t * u * (1.0 - u) * (1.0 - 2.0 * v),
        theta_interval=(-1.0, 1.0),
        theta_independence=0.0,
        inverse_d1=_fgm_inverse,
        label="fgm",
    )


def make_copula(family_id: str) -> SurvivalCopulaFamily:
    key = str(family_id).strip().lower()
    if key == "independence":
        return _independence()
    if key == "fgm":
        return _fgm()
    raise InvalidFamilyId(f"unknown copula {family_id!r}; choose from {COPULA_IDS}")


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def conditional_inverse(f: SurvivalCopulaFamily, theta, u, w, iterations=80):
    """Return ``v`` with ``d1(theta, u, v) = w``.

    Used to sample ``V`` given ``U = u``: if ``W`` is uniform then
    ``conditional_inverse(f, theta, u, W)`` has the conditional law of ``V``.
    """
    f.check_theta(theta)
    u_arr = np.asarray(u, dtype=float)
    w_arr = np.asarray(w, dtype=float)
    if f.inverse_d1 is not None:
        return _scalar(np.clip(f.inverse_d1(theta, u_arr, w_arr), 0.0, 1.0))
    u_arr, w_arr = np.broadcast_arrays(u_arr, w_arr)
    lo_val = f.d1(theta, u_arr, np.zeros_like(u_arr))
    hi_val = f.d1(theta, u_arr, np.ones_like(u_arr))
    if np.any(lo_val > w_arr + 1e-12) or np.any(hi_val < w_arr - 1e-12):
        raise NoRoot("d1 does not bracket the target on v in [0, 1]")
    lo = np.zeros_like(w_arr)
    hi = np.ones_like(w_arr)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = f.d1(theta, u_arr, mid) < w_arr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return _scalar(0.5 * (lo + hi))


def diagonal_bound_check(f: SurvivalCopulaFamily, theta, n=2001) -> ConditionReport:
    """Grid check of ``c(theta, u, u) >= max(2u - 1, 0)``."""
    f.check_theta(theta)
    u = np.linspace(0.0, 1.0, n)
    lhs = f.c(theta, u, u)
    rhs = np.maximum(2.0 * u - 1.0, 0.0)
    direction, violations = compare_on_grid(u, lhs, rhs, tol=1e-12)
    ok = direction in ("ge", "both-boundary")
    return ConditionReport(
        theorem_id="diagonal-lower-bound",
        direction=direction,
        pointwise_violations=[v for v in violations if v[3] == "ge"],
        implied_conclusion="C(u,u) >= max(2u-1, 0)",
        conclusion_verified="holds" if ok else "fails",
        details={"copula": f.label, "theta": float(theta)},
    )


def validate_copula(f: SurvivalCopulaFamily, theta, n=101, slack=1e-12) -> dict:
    """Boundary, 2-increasing and Frechet-Hoeffding checks on an ``n x n`` grid.

    Returns a dict of named booleans.
    """
    f.check_theta(theta)
    g = np.linspace(0.0, 1.0, n)
    U, V = np.meshgrid(g, g, indexing="ij")
    C = f.c(theta, U, V)
    zeros, ones = np.zeros_like(g), np.ones_like(g)
    boundary = (
        np.allclose(f.c(theta, g, zeros), 0.0, atol=slack)
        and np.allclose(f.c(theta, zeros, g), 0.0, atol=slack)
        and np.allclose(f.c(theta, g, ones), g, atol=slack)
        and np.allclose(f.c(theta, ones, g), g, atol=slack)
    )
    volumes = C[1:, 1:] - C[:-1, 1:] - C[1:, :-1] + C[:-1, :-1]
    increasing = bool(np.all(volumes >= -slack))
    lower = np.maximum(U + V - 1.0, 0.0)
    upper = np.minimum(U, V)
    frechet = bool(np.all(C >= lower - slack) and np.all(C <= upper + slack))
    return {"boundary": bool(boundary), "two_increasing": increasing, "frechet_hoeffding": frechet}
