"""Parametric distortion families acting on survival functions.

A family maps ``(alpha, u) -> h_alpha(u)`` with ``h(0) = 0``, ``h(1) = 1`` and
``h`` increasing in ``u``. Distorting the survival function of ``X`` by
``h_alpha`` gives the survival function of ``X_alpha``. Four hazard models ship:

=====  =================================  ==========================================
id     model                              h_alpha(u)
=====  =================================  ==========================================
ph     proportional hazard                ``u**alpha``
prh    proportional reversed hazard       ``1 - (1-u)**alpha``
gah    generalised additive hazard        ``u * exp(-alpha K(sf_inverse(u)))``
pow    power hazard                       ``sf(sf_inverse(u)**alpha)``
=====  =================================  ==========================================

``gah`` and ``pow`` depend on the base law and close over it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .distributions import ContinuousDistribution
from .errors import (
    AlphaOutOfRange,
    ConfigError,
    InvalidModel,
    InverseFailure,
    MissingK,
    OutsideSupport,
    UOutOfRange,
)

__all__ = [
    "DistortionFamily",
    "DistortedVariable",
    "KFunction",
    "CustomK",
    "parse_k",
    "make_family",
    "parse_distortion",
    "evaluate",
    "derivative_alpha",
    "hazard_of_distorted",
    "bisect_inverse",
    "identity_limit_holds",
    "degenerate_limit_holds",
    "SURROGATE_INFINITY",
]

FD_STEP = 1e-5
SURROGATE_INFINITY = 1e6
SURROGATE_ZERO = 1e-9


def bisect_inverse(h, v, iterations=60, tol=0.0):
    """Solve ``h(u) = v`` on ``[0, 1]`` for increasing ``h`` by bisection.

    Vectorised over ``v``. Stops after ``iterations`` halvings or once the
    bracket is narrower than ``tol``.
    """
    v = np.asarray(v, dtype=float)
    lo = np.zeros_like(v)
    hi = np.ones_like(v)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = h(mid) < v
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if tol and np.all(hi - lo <= tol):
            break
    if tol and np.any(hi - lo > tol):
        raise InverseFailure("bisection did not bracket the inverse to tolerance")
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DistortionFamily:
    """A one-parameter family of distortion functions.

    ``h``, ``dh_dalpha``, ``dh_du`` and ``h_inverse`` take ``(alpha, u)`` with
    ``u`` a numpy array. Missing derivatives fall back to central differences
    and a missing inverse to bisection.
    """

    h: Callable
    alpha_interval: tuple[float, float]
    label: str
    dh_dalpha: Optional[Callable] = None
    dh_du: Optional[Callable] = None
    h_inverse: Optional[Callable] = None
    alpha_identity: Optional[float] = None
    alpha_degenerate: Optional[float] = None
    model: str = "custom"
    k_function: Optional["KFunction"] = field(default=None, compare=False)

    def value(self, alpha, u):
        return self.h(alpha, np.asarray(u, dtype=float))

    def d_alpha(self, alpha, u):
        u = np.asarray(u, dtype=float)
        if self.dh_dalpha is not None:
            return self.dh_dalpha(alpha, u)
        step = FD_STEP * max(1.0, abs(alpha))
        return (self.h(alpha + step, u) - self.h(alpha - step, u)) / (2.0 * step)

    def d_u(self, alpha, u):
        u = np.asarray(u, dtype=float)
        if self.dh_du is not None:
            return self.dh_du(alpha, u)
        step = 1e-6
        lo = np.clip(u - step, 0.0, 1.0)
        hi = np.clip(u + step, 0.0, 1.0)
        return (self.h(alpha, hi) - self.h(alpha, lo)) / (hi - lo)

    def inverse(self, alpha, v, iterations=60, tol=0.0):
        v = np.asarray(v, dtype=float)
        if self.h_inverse is not None:
            return self.h_inverse(alpha, v)
        return bisect_inverse(lambda u: self.h(alpha, u), v, iterations, tol)

    def contains(self, alpha) -> bool:
        lo, hi = self.alpha_interval
        return lo < alpha < hi

    def check_alpha(self, alpha):
        if not (isinstance(alpha, (int, float, np.floating)) and math.isfinite(alpha)):
            raise AlphaOutOfRange(f"alpha must be a finite number, got {alpha!r}")
        if not self.contains(alpha):
            raise AlphaOutOfRange(
                f"alpha={alpha!r} outside {self.label} interval {self.alpha_interval}"
            )


# -- K functions for the additive model --------------------------------------

_K_RE = re.compile(
    r"^\s*(?:(?P<c>[0-9.eE+-]+)\s*\*\s*)?t\s*(?:\^\s*(?P<n>[0-9.eE+-]+))?\s*(?:/\s*(?P<d>[0-9.eE+-]+))?\s*$"
)


@dataclass(frozen=True)
class KFunction:
    """Cumulative additive-hazard term ``K(t) = coef * t**power``."""

    coef: float
    power: float
    text: str

    def __call__(self, t):
        return self.coef * np.asarray(t, dtype=float) ** self.power

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.power == 1.0:
            return np.full_like(t, self.coef)
        return self.coef * self.power * t ** (self.power - 1.0)

    @property
    def monotonicity(self) -> str:
        if self.coef == 0 or self.power == 0:
            return "neither"
        return "increasing" if self.coef * self.power > 0 else "decreasing"


@dataclass(frozen=True)
class CustomK:
    """User-supplied ``K``; ``monotonicity`` is ``"increasing"``,
    ``"decreasing"``, ``"neither"`` or ``None`` (undeclared, grid-tested)."""

    fn: Callable
    monotonicity: Optional[str] = None
    text: str = "custom"
    derivative_fn: Optional[Callable] = None

    def __call__(self, t):
        return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.derivative_fn is not None:
            return np.asarray(self.derivative_fn(t), dtype=float)
        step = 1e-6 * np.maximum(1.0, np.abs(t))
        return (self(t + step) - self(np.maximum(t - step, 0.0))) / (t + step - np.maximum(t - step, 0.0))


def parse_k(text: str) -> KFunction:
    """Parse ``t``, ``c*t``, ``t^n/c`` or ``c*t^n/d``."""
    m = _K_RE.match(text)
    if not m:
        raise ConfigError(f"cannot parse K function {text!r}; use forms like t^2/2, t, 3*t")
    try:
        c = float(m.group("c")) if m.group("c") else 1.0
        n = float(m.group("n")) if m.group("n") else 1.0
        d = float(m.group("d")) if m.group("d") else 1.0
    except ValueError:
        raise ConfigError(f"bad number in K function {text!r}") from None
    if d == 0:
        raise ConfigError("division by zero in K function")
    if n <= 0:
        raise ConfigError("K needs a positive power so that K(0) = 0")
    return KFunction(coef=c / d, power=n, text=text.strip())


# -- the four hazard models --------------------------------------------------

def _xlog(u, a):
    # u**a * log(u) with the u -> 0 limit 0
    pos = u > 0
    safe = np.where(pos, u, 1.0)
    return np.where(pos, safe ** a * np.log(safe), 0.0)


def _ph():
    return DistortionFamily(
        h=lambda a, u: u ** a,
        dh_dalpha=lambda a, u: _xlog(u, a),
        dh_du=lambda a, u: a * u ** (a - 1.0),
        h_inverse=lambda a, v: v ** (1.0 / a),
        alpha_interval=(0.0, math.inf),
        alpha_identity=1.0,
        alpha_degenerate=math.inf,
        label="ph",
        model="ph",
    )


def _prh():
    return DistortionFamily(
        h=lambda a, u: 1.0 - (1.0 - u) ** a,
        dh_dalpha=lambda a, u: -_xlog(1.0 - u, a),
        dh_du=lambda a, u: a * (1.0 - u) ** (a - 1.0),
        h_inverse=lambda a, v: 1.0 - (1.0 - v) ** (1.0 / a),
        alpha_interval=(0.0, math.inf),
        alpha_identity=1.0,
        alpha_degenerate=0.0,
        label="prh",
        model="prh",
    )


def _quiet():
    # endpoint evaluations legitimately produce inf/nan that get masked out
    return np.errstate(all="ignore")


def _gah(base: ContinuousDistribution, K):
    def h(a, u):
        with _quiet():
            val = u * np.exp(-a * K(base.sf_inverse(u)))
        return np.where(u > 0, val, 0.0)

    def dh_dalpha(a, u):
        with _quiet():
            kx = K(base.sf_inverse(u))
            hv = u * np.exp(-a * kx)
            val = -kx * hv
        return np.where((u > 0) & np.isfinite(val), val, 0.0)

    def dh_du(a, u):
        with _quiet():
            x = base.sf_inverse(u)
            val = np.exp(-a * K(x)) * (1.0 + a * u * K.derivative(x) * base.dqdf(u))
        return np.where(np.isfinite(val), val, 0.0)

    fam = DistortionFamily(
        h=h,
        dh_dalpha=dh_dalpha,
        dh_du=dh_du,
        h_inverse=None,
        alpha_interval=(0.0, math.inf),
        alpha_identity=0.0,
        alpha_degenerate=None,
        label=f"gah:K={K.text}",
        model="gah",
        k_function=K,
    )
    if isinstance(K, KFunction):
        degenerate = K.coef > 0
    else:
        degenerate = _vanishes(fam, SURROGATE_INFINITY)
    return replace(fam, alpha_degenerate=math.inf) if degenerate else fam


def _pow(base: ContinuousDistribution):
    sf, pdf = base.sf, base.pdf

    def power_point(a, u):
        x = base.sf_inverse(u)
        return x, np.where(x > 0, np.exp(a * np.log(np.where(x > 0, x, 1.0))), 0.0)

    def h(a, u):
        u = np.asarray(u, dtype=float)
        with _quiet():
            val = sf(power_point(a, u)[1])
        return np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, val))

    def dh_dalpha(a, u):
        with _quiet():
            x, xa = power_point(a, u)
            val = -pdf(xa) * xa * np.log(x)
        interior = (u > 0) & (u < 1) & np.isfinite(val)
        return np.where(interior, val, 0.0)

    def dh_du(a, u):
        with _quiet():
            x, xa = power_point(a, u)
            val = pdf(xa) * a * xa / x * base.dqdf(u)
        return np.where(np.isfinite(val), val, 0.0)

    def h_inverse(a, v):
        # h_alpha^{-1} = h_{1/alpha}
        return h(1.0 / a, v)

    fam = DistortionFamily(
        h=h,
        dh_dalpha=dh_dalpha,
        dh_du=dh_du,
        h_inverse=h_inverse,
        alpha_interval=(0.0, math.inf),
        alpha_identity=1.0,
        alpha_degenerate=None,
        label="pow",
        model="pow",
    )
    # the degenerate point depends on the base law; probe both ends
    for candidate, surrogate in ((0.0, SURROGATE_ZERO), (math.inf, SURROGATE_INFINITY)):
        if _vanishes(fam, surrogate):
            return replace(fam, alpha_degenerate=candidate)
    return fam


def _vanishes(fam, alpha, threshold=1e-6):
    u = np.linspace(0.0, 0.9, 91)
    with _quiet():
        return bool(np.all(fam.value(alpha, u) < threshold))


_MODELS = ("ph", "prh", "gah", "pow")


def make_family(model_id: str, base: ContinuousDistribution | None = None,
                K: KFunction | Callable | str | None = None) -> DistortionFamily:
    """Build one of the shipped distortion families.

    Parameters
    ----------
    model_id : {"ph", "prh", "gah", "pow"}
    base : ContinuousDistribution, optional
        Required for ``gah`` and ``pow``.
    K : KFunction, CustomK, callable or str, optional
        Additive cumulative term for ``gah`` (e.g. ``"t^2/2"``). A bare
        callable is wrapped in :class:`CustomK` with undeclared monotonicity.
    """
    model_id = model_id.strip().lower()
    if model_id not in _MODELS:
        raise InvalidModel(f"unknown distortion model {model_id!r}; choose from {_MODELS}")
    if model_id == "ph":
        return _ph()
    if model_id == "prh":
        return _prh()
    if base is None:
        raise InvalidModel(f"{model_id} needs the base distribution")
    if model_id == "pow":
        return _pow(base)
    if K is None:
        raise MissingK("gah needs a K function")
    if isinstance(K, str):
        K = parse_k(K)
    elif callable(K) and not isinstance(K, (KFunction, CustomK)):
        K = CustomK(K)
    if isinstance(K, KFunction) and K.coef < 0:
        raise MissingK("K must be nonnegative")
    fam = _gah(base, K)
    if isinstance(K, CustomK):
        # a nonnegative distorted hazard is only checkable numerically:
        # h must stay a distortion on a grid of u and alpha
        u = np.linspace(0.0, 1.0, 201)
        for a in (0.5, 1.0, 2.0):
            hv = fam.value(a, u)
            if np.any(~np.isfinite(hv)) or np.any(hv < -1e-12) or np.any(hv > 1 + 1e-12) \
                    or np.any(np.diff(hv) < -1e-12):
                raise MissingK(f"K={K.text} does not give a valid distortion at alpha={a:g}")
    return fam


def parse_distortion(text: str, base: ContinuousDistribution) -> DistortionFamily:
    """Parse ``"ph"``, ``"prh"``, ``"pow"`` or ``"gah:K=t^2/2"``."""
    text = text.strip()
    if text.lower().startswith("gah"):
        rest = text[3:].strip()
        if not rest:
            raise MissingK("gah needs ':K=<expr>'")
        if not rest.startswith(":"):
            raise ConfigError(f"cannot parse distortion {text!r}")
        key, _, expr = rest[1:].partition("=")
        if key.strip() != "K" or not expr.strip():
            raise MissingK(f"expected gah:K=<expr>, got {text!r}")
        return make_family("gah", base, expr)
    return make_family(text, base)


# -- operations --------------------------------------------------------------

def _check_u(u):
    arr = np.asarray(u, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or not np.all(np.isfinite(arr)):
        raise UOutOfRange(f"u must lie in [0, 1], got {u!r}")
    return arr


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def evaluate(f: DistortionFamily, alpha: float, u):
    f.check_alpha(alpha)
    arr = _check_u(u)
    val = np.clip(f.value(alpha, arr), 0.0, 1.0)
    val = np.where(arr == 0, 0.0, np.where(arr == 1, 1.0, val))
    return _scalar(val)


def derivative_alpha(f: DistortionFamily, alpha: float, u):
    f.check_alpha(alpha)
    arr = _check_u(u)
    val = np.where((arr == 0) | (arr == 1), 0.0, f.d_alpha(alpha, arr))
    return _scalar(val)


@dataclass(frozen=True)
class DistortedVariable:
    """``X_alpha`` with survival function ``h_alpha(sf(x))``."""

    base: ContinuousDistribution
    family: DistortionFamily
    alpha: float

    def __post_init__(self):
        self.family.check_alpha(self.alpha)

    def sf(self, x):
        return self.family.value(self.alpha, self.base.sf(x))

    def sf_inverse(self, v):
        return self.base.sf_inverse(self.family.inverse(self.alpha, v))

    def hazard(self, x):
        return hazard_of_distorted(self, x)


def hazard_of_distorted(v: DistortedVariable, x):
    """Hazard rate of ``X_alpha`` by the chain rule.

    ``-(d/dx) log h(sf(x)) = h'(sf(x)) * pdf(x) / h(sf(x))``.
    """
    xa = np.asarray(x, dtype=float)
    lo, hi = v.base.support
    if np.any((xa <= lo) | (xa >= hi)):
        raise OutsideSupport(f"x={x!r} not inside support {v.base.support}")
    u = v.base.sf(xa)
    hv = v.family.value(v.alpha, u)
    if np.any(hv <= 0):
        raise OutsideSupport("distorted survival function vanishes at x")
    return _scalar(v.family.d_u(v.alpha, u) * v.base.pdf(xa) / hv)


def identity_limit_holds(f: DistortionFamily, offset=1e-6, tol=1e-5) -> bool:
    """Numerical check that ``h_alpha(u) -> u`` as ``alpha -> alpha_identity``."""
    if f.alpha_identity is None or not math.isfinite(f.alpha_identity):
        return False
    u = np.linspace(0.0, 1.0, 101)
    ok = True
    for a in (f.alpha_identity - offset, f.alpha_identity + offset):
        if f.contains(a):
            ok &= bool(np.max(np.abs(f.value(a, u) - u)) <= tol)
    return ok


def degenerate_limit_holds(f: DistortionFamily) -> bool:
    """Numerical check that ``h_alpha(u) -> 0`` for ``u <= 0.9`` at a surrogate
    of ``alpha_degenerate`` (``1e6`` for infinity, ``1e-9`` for zero)."""
    a0 = f.alpha_degenerate
    if a0 is None:
        return False
    if math.isinf(a0):
        surrogate = SURROGATE_INFINITY
    elif a0 == f.alpha_interval[0]:
        surrogate = a0 + SURROGATE_ZERO
    else:
        surrogate = a0
    return _vanishes(f, surrogate)
