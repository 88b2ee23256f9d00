"""Monte Carlo estimate of ``E|X - X_alpha|`` under a survival copula.

A pair is drawn by sampling ``(U, V)`` from the copula through the
conditional inverse of ``d1``, then mapping ``X = sf_inverse(U)`` and
``X_alpha = sf_inverse(h^{-1}(V))`` (the survival function of ``X_alpha``
is ``h(sf)``).

Streams are reproducible: the master seed spawns one Philox generator per
fixed-size chunk, so the estimate does not depend on the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .copulas import SurvivalCopulaFamily, conditional_inverse
from .distortions import DistortionFamily
from .distributions import ContinuousDistribution

__all__ = ["McEstimate", "sample_pair", "sample_pairs", "estimate_nu", "spearman", "CHUNK"]

CHUNK = 1 << 16
INVERSE_ITERATIONS = 80
INVERSE_TOL = 1e-12


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int
    seed: int


def _generator(seed_seq):
    return np.random.Generator(np.random.Philox(seed_seq))


def sample_pairs(d: ContinuousDistribution, f: DistortionFamily, alpha: float,
                 c: SurvivalCopulaFamily, theta: float, n: int, rng: np.random.Generator):
    """``n`` draws of ``(X, X_alpha)``; returns two arrays."""
    f.check_alpha(alpha)
    u = rng.random(n)
    w = rng.random(n)
    v = np.asarray(conditional_inverse(c, theta, u, w))
    x = d.sf_inverse(u)
    x_alpha = d.sf_inverse(f.inverse(alpha, v, INVERSE_ITERATIONS, INVERSE_TOL))
    return x, x_alpha


def sample_pair(d, f, alpha, c, theta, rng: np.random.Generator):
    x, xa = sample_pairs(d, f, alpha, c, theta, 1, rng)
    return float(x[0]), float(xa[0])


def _chunk_stats(d, f, alpha, c, theta, size, seed_seq):
    x, xa = sample_pairs(d, f, alpha, c, theta, size, _generator(seed_seq))
    z = np.abs(x - xa)
    mean = float(np.mean(z))
    return size, mean, float(np.sum((z - mean) ** 2))


def estimate_nu(d, f, alpha, c, theta, n: int = 1_000_000, seed: int = 0,
                workers: int | None = None) -> McEstimate:
    """Plain Monte Carlo mean of ``|X - X_alpha|`` with its standard error."""
    if n < 2:
        raise ValueError("need at least two samples")
    c.check_theta(theta)
    sizes = [CHUNK] * (n // CHUNK) + ([n % CHUNK] if n % CHUNK else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers is None:
        workers = int(os.environ.get("DISTGINI_THREADS", "1") or 1)
    args = [(d, f, alpha, c, theta, s, ss) for s, ss in zip(sizes, children)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _chunk_stats(*a), args))
    else:
        parts = [_chunk_stats(*a) for a in args]
    # Chan et al. pairwise update, merged in chunk order
    count, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        total = count + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * count * nb / total
        count = total
    std = math.sqrt(m2 / (count - 1))
    return McEstimate(mean=mean, std_error=std / math.sqrt(count), n=count, seed=seed)


def spearman(x, y) -> float:
    return float(stats.spearmanr(x, y).statistic)
