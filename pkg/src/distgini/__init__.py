"""Distorted and copula-distorted Gini mean differences.

Quadrature for ``E|X - X_alpha|`` where ``X_alpha`` has survival function
``h(alpha, F_bar)``, optionally coupled to ``X`` through a survival copula,
plus checkers for sufficient conditions on the extremum at the identity
parameter, an extremum locator, and a Monte Carlo cross-check.
"""

from .conditions import THEOREM_IDS, audit, check
from .copulas import SurvivalCopulaFamily, conditional_inverse, make_copula, validate_copula
from .distortions import DistortionFamily, KFunction, make_family, parse_distortion
from .distributions import (
    ContinuousDistribution,
    aging_class,
    dqdf_symmetry,
    exponential,
    gini_index,
    gmd,
    parse_distribution,
    powerlaw,
    scaled,
    shifted,
    uniform,
    weibull,
)
from . import errors
from .errors import ConfigError, DistGiniError, NumericalError, ParameterError
from .extrema import ExtremumResult, find_extremum, scan
from .measures import (
    MeasureResult,
    copula_gini_index,
    distorted_mean,
    eta,
    eta_dalpha,
    nu,
    nu_dalpha,
)
from .montecarlo import McEstimate, estimate_nu
from .quadrature import QuadratureResult, integrate_01

__version__ = "0.1.0"
