"""Shrinkage EPLS: MAP directions under conjugate and sparse priors.

The posterior of beta given the data is proportional to
exp(K_n <beta, beta_ml>) * pi(beta), with K_n = theta_n ||v_hat||.
"""
from __future__ import annotations

import numpy as np
import numpy.typing as npt

from sepals.config import DEGENERATE_NORM
from sepals.exceptions import DegenerateDirection, DomainError, OverShrunk
from sepals.models import ConjugatePrior, Direction, FitResult, NoPrior, Prior, SparsePrior


def soft_threshold(x: npt.ArrayLike, lam: float) -> float | npt.NDArray[np.float64]:
    """S_lam(x) = sign(x) (|x| - lam) 1{|x| > lam}, applied elementwise."""
    if not lam >= 0:
        raise DomainError(f"lambda must be non-negative, got {lam!r}")
    x = np.asarray(x, dtype=float)
    shrunk = np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)
    return float(shrunk) if shrunk.ndim == 0 else shrunk


def conjugate_map(fit: FitResult, mu0: Direction, kappa0: float) -> tuple[Direction, float]:
    """Posterior mode and concentration under a vMF(mu0, kappa0) prior."""
    if not kappa0 >= 0:
        raise DomainError(f"kappa0 must be non-negative, got {kappa0!r}")
    if kappa0 == 0:
        return fit.beta, fit.K_n
    location = fit.K_n * fit.beta.coords + kappa0 * mu0.coords
    kappa_n = float(np.linalg.norm(location))
    if kappa_n < DEGENERATE_NORM:
        raise DegenerateDirection("prior location cancels the EPLS direction")
    return Direction(location / kappa_n), kappa_n


def sparse_map(fit: FitResult, lam: float) -> Direction:
    """Posterior mode under the Laplace prior exp(-lam ||beta||_1).

    Raises:
        OverShrunk: if every coordinate of K_n beta_ml is within lam of zero.
    """
    if lam == 0:
        return fit.beta
    shrunk = soft_threshold(fit.K_n * fit.beta.coords, lam)
    if not np.any(shrunk):
        raise OverShrunk(f"lambda={lam:g} removes every coordinate (K_n={fit.K_n:.6g})")
    return Direction.from_vector(shrunk)


def map_direction(fit: FitResult, prior: Prior) -> Direction:
    match prior:
        case ConjugatePrior(mu0=mu0, kappa0=kappa0):
            return conjugate_map(fit, mu0, kappa0)[0]
        case SparsePrior(lam=lam):
            return sparse_map(fit, lam)
        case NoPrior() | Prior():
            return fit.beta


def log_posterior(
    beta: Direction | npt.ArrayLike,
    fit: FitResult,
    prior: Prior,
) -> float | npt.NDArray[np.float64]:
    """Unnormalized log-posterior; rows of a 2-d beta are scored independently."""
    coords = beta.coords if isinstance(beta, Direction) else np.asarray(beta, dtype=float)
    value = fit.K_n * (coords @ fit.beta.coords)
    match prior:
        case ConjugatePrior(mu0=mu0, kappa0=kappa0):
            value = value + kappa0 * (coords @ mu0.coords)
        case SparsePrior(lam=lam):
            value = value - lam * np.abs(coords).sum(axis=-1)
    return float(value) if np.ndim(value) == 0 else value
