"""Modified Bessel functions and von Mises--Fisher log-densities.

Two supports are covered: the unit sphere S^{p-1} and the ball of radius r,
whose density at x is 2*pi * c_{p+2}(kappa) * r^{-p} * exp(kappa <mu, x> / r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

from sepals.config import UNIT_NORM_TOL
from sepals.exceptions import DomainError

SERIES_RTOL = 1e-15
SERIES_MAX_TERMS = 500
LOG_SPACE_KAPPA = 700.0
SPHERE_TOL = 1e-9


def _check_order(q: float, kappa: float) -> None:
    if q < 0 or kappa < 0 or math.isnan(q) or math.isnan(kappa):
        raise DomainError(f"Bessel I needs q >= 0 and kappa >= 0, got q={q!r}, kappa={kappa!r}")


def log_bessel_i(q: float, kappa: float) -> float:
    """log I_q(kappa) from the power series summed in log space."""
    _check_order(q, kappa)
    if kappa == 0:
        return 0.0 if q == 0 else -math.inf
    half_log = math.log(kappa / 2)
    log_term = q * half_log - gammaln(q + 1)
    log_sum = log_term
    log_rtol = math.log(SERIES_RTOL)
    # the terms peak near l = kappa / 2, so the cap grows with kappa
    max_terms = SERIES_MAX_TERMS + int(2 * kappa)
    for ell in range(max_terms):
        log_term += 2 * half_log - math.log(ell + 1) - math.log(q + ell + 1)
        log_sum = float(np.logaddexp(log_sum, log_term))
        if log_term - log_sum < log_rtol and ell + 1 > kappa / 2:
            break
    return log_sum


def bessel_i(q: float, kappa: float) -> float:
    """Modified Bessel function of the first kind I_q(kappa), q >= 0."""
    _check_order(q, kappa)
    if kappa == 0:
        return 1.0 if q == 0 else 0.0
    if kappa > LOG_SPACE_KAPPA:
        return float(np.exp(log_bessel_i(q, kappa)))

    quarter = (kappa / 2) ** 2
    term = math.exp(q * math.log(kappa / 2) - gammaln(q + 1))
    total = term
    for ell in range(SERIES_MAX_TERMS):
        term *= quarter / ((ell + 1) * (q + ell + 1))
        total += term
        if term < SERIES_RTOL * total:
            break
    return total


def log_c_p(p: int, kappa: float) -> float:
    """Log normalizing constant of vMF on S^{p-1}.

    At kappa = 0 this is minus the log surface area of the sphere, the limit
    of the kappa > 0 branch.
    """
    if p < 2:
        raise DomainError(f"dimension must be at least 2, got {p!r}")
    if kappa < 0:
        raise DomainError(f"kappa must be non-negative, got {kappa!r}")
    if kappa == 0:
        return float(gammaln(p / 2) - math.log(2) - (p / 2) * math.log(math.pi))
    nu = p / 2 - 1
    return nu * math.log(kappa) - (p / 2) * math.log(2 * math.pi) - log_bessel_i(nu, kappa)


def _unit(mu: npt.ArrayLike) -> npt.NDArray[np.float64]:
    mu = np.asarray(mu, dtype=float).ravel()
    if abs(float(np.linalg.norm(mu)) - 1.0) > UNIT_NORM_TOL:
        raise DomainError("location parameter must be a unit vector")
    return mu


def _as_rows(x: npt.ArrayLike, p: int) -> npt.NDArray[np.float64]:
    rows = np.atleast_2d(np.asarray(x, dtype=float))
    if rows.shape[-1] != p:
        raise DomainError(f"points have dimension {rows.shape[-1]}, expected {p}")
    return rows


def logpdf_sphere(x: npt.ArrayLike, mu: npt.ArrayLike, kappa: float) -> float | npt.NDArray[np.float64]:
    """vMF log-density on the unit sphere; -inf off the sphere.

    Accepts a single point or an (m, p) array of points.
    """
    mu = _unit(mu)
    p = mu.shape[0]
    rows = _as_rows(x, p)
    on_sphere = np.abs(np.linalg.norm(rows, axis=1) - 1.0) <= SPHERE_TOL
    values = np.where(on_sphere, log_c_p(p, kappa) + kappa * (rows @ mu), -np.inf)
    return float(values[0]) if np.ndim(x) == 1 else values


@dataclass(frozen=True)
class BallVmfParams:
    mu: npt.NDArray[np.float64]
    r: float
    kappa: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", _unit(self.mu))
        if not self.r > 0:
            raise DomainError(f"radius must be positive, got {self.r!r}")
        if not self.kappa >= 0:
            raise DomainError(f"kappa must be non-negative, got {self.kappa!r}")

    @property
    def p(self) -> int:
        return self.mu.shape[0]

    def log_normalizer(self) -> float:
        return math.log(2 * math.pi) + log_c_p(self.p + 2, self.kappa) - self.p * math.log(self.r)


def logpdf_ball(x: npt.ArrayLike, params: BallVmfParams) -> float | npt.NDArray[np.float64]:
    """vMF log-density on the ball of radius params.r; -inf outside."""
    rows = _as_rows(x, params.p)
    inside = np.linalg.norm(rows, axis=1) <= params.r
    values = np.where(
        inside,
        params.log_normalizer() + params.kappa * (rows @ params.mu) / params.r,
        -np.inf,
    )
    return float(values[0]) if np.ndim(x) == 1 else values
