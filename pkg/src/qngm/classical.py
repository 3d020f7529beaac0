"""Discrete distributions, the classical Fisher metric, KL and rescaled Renyi.

Distributions are probability vectors p with full support.  The free
coordinates of an N-outcome distribution are its first N - 1 probabilities;
p_N = 1 - sum of the rest.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateSupportError, ShapeMismatchError

ALPHA_KL_CROSSOVER = 1e-6
SUM_TOL = 1e-12


def check_distribution(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ShapeMismatchError(f"expected a probability vector of length >= 2, got {p.shape}")
    if np.any(p <= 0.0):
        raise DegenerateSupportError(f"distribution has non-positive entries: {p}")
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise DegenerateSupportError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def probs_from_free(free: np.ndarray) -> np.ndarray:
    """Extend N - 1 free coordinates to the full probability vector."""
    free = np.asarray(free, dtype=float)
    p = np.append(free, 1.0 - free.sum())
    if np.any(p <= 0.0):
        raise DegenerateSupportError(f"free coordinates {free} leave the simplex interior")
    return p


def free_from_probs(p: np.ndarray) -> np.ndarray:
    return check_distribution(p)[:-1].copy()


def fisher(p: np.ndarray) -> np.ndarray:
    """Fisher metric in the free coordinates: delta_ij / p_i + 1 / p_N."""
    p = check_distribution(p)
    n = p.size
    return np.diag(1.0 / p[: n - 1]) + 1.0 / p[-1]


def kl(p: np.ndarray, q: np.ndarray) -> float:
    """Kullback-Leibler divergence sum p ln(p/q)."""
    p, q = check_distribution(p), check_distribution(q)
    if p.shape != q.shape:
        raise ShapeMismatchError(f"distributions of different sizes: {p.shape} vs {q.shape}")
    return float(np.sum(p * np.log(p / q)))


def renyi(p: np.ndarray, q: np.ndarray, alpha: float) -> float:
    """Rescaled Renyi divergence (1 / (alpha (alpha - 1))) ln sum p^alpha q^(1-alpha).

    Falls back to kl for |alpha - 1| below the crossover where the prefactor
    amplifies rounding error.
    """
    if abs(alpha - 1.0) < ALPHA_KL_CROSSOVER:
        return kl(p, q)
    if abs(alpha) < ALPHA_KL_CROSSOVER:
        raise DegenerateSupportError("renyi index alpha = 0 is not supported")
    p, q = check_distribution(p), check_distribution(q)
    if p.shape != q.shape:
        raise ShapeMismatchError(f"distributions of different sizes: {p.shape} vs {q.shape}")
    return float(np.log(np.sum(p**alpha * q ** (1.0 - alpha))) / (alpha * (alpha - 1.0)))
