"""Extreme Partial Least Squares direction.

The direction maximizes the empirical covariance between <beta, X> and Y
restricted to the exceedances Y >= y_n. With Phi_i the exceedance weights,

    v_hat(y) = sum_i X_i Phi_i(y),        beta_hat = v_hat / ||v_hat||.
"""
from __future__ import annotations

import numpy as np
import numpy.typing as npt

from sepals.config import THETA_N
from sepals.exceptions import BadThreshold, DomainError
from sepals.logger import get_logger
from sepals.models import Dataset, Direction, FitResult

logger = get_logger("sepals.epls")


def _response(Y: npt.ArrayLike) -> npt.NDArray[np.float64]:
    Y = np.asarray(Y, dtype=float).ravel()
    if Y.size == 0:
        raise DomainError("response vector is empty")
    return Y


def empirical_survival(y: float, Y: npt.ArrayLike) -> float:
    Y = _response(Y)
    return float(np.count_nonzero(Y >= y)) / Y.size


def truncated_mean(y: float, Y: npt.ArrayLike) -> float:
    Y = _response(Y)
    return float(np.sum(Y, where=Y >= y)) / Y.size


def phi_weights(y: float, Y: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Phi_i = (1/n) (F_bar(y) Y_i - m_Y(y)) 1{Y_i >= y}.

    Written as (count * Y_i - sum of exceedances) / n^2 so that a single
    exceedance gets a weight of exactly zero.
    """
    Y = _response(Y)
    n = Y.size
    exceed = Y >= y
    count = np.count_nonzero(exceed)
    total = np.sum(Y, where=exceed)
    return np.where(exceed, (count * Y - total) / n**2, 0.0)


def v_hat(y: float, data: Dataset) -> npt.NDArray[np.float64]:
    # elementwise sum keeps results independent of BLAS threading
    return (phi_weights(y, data.Y)[:, None] * data.X).sum(axis=0)


def threshold_from_k(Y: npt.ArrayLike, k: int) -> float:
    """The k-th largest response, Y_{n-k+1,n}."""
    Y = _response(Y)
    if not 1 <= k <= Y.size:
        raise BadThreshold(f"k must lie in [1, {Y.size}], got {k!r}")
    return float(np.partition(Y, Y.size - k)[Y.size - k])


def fit_epls_at(data: Dataset, y_threshold: float, theta_n: float = THETA_N) -> FitResult:
    """EPLS fit at an explicit threshold; ties above it all count."""
    if not theta_n > 0:
        raise DomainError(f"theta_n must be positive, got {theta_n!r}")
    k_effective = int(np.count_nonzero(data.Y >= y_threshold))
    v = v_hat(y_threshold, data)
    v_norm = float(np.linalg.norm(v))
    logger.debug(f"[fit y={y_threshold:.6g}] k_effective={k_effective} |v_hat|={v_norm:.6g}")
    beta = Direction.from_vector(v)
    return FitResult(
        beta=beta,
        y_threshold=float(y_threshold),
        k=k_effective,
        v_norm=v_norm,
        K_n=theta_n * v_norm,
        theta_n=theta_n,
    )


def fit_epls(data: Dataset, k: int, theta_n: float = THETA_N) -> FitResult:
    """EPLS fit using the k largest responses.

    Raises:
        BadThreshold: if k is not in [1, n].
        DegenerateDirection: if v_hat vanishes (k = 1, or tied exceedances).
    """
    return fit_epls_at(data, threshold_from_k(data.Y, k), theta_n)


def ball_loglik(
    beta: Direction | npt.ArrayLike,
    data: Dataset,
    y: float,
    theta_n: float,
    eps_norms: npt.ArrayLike,
) -> float | npt.NDArray[np.float64]:
    """Ball-vMF log-likelihood of beta, up to beta-free terms.

    Each X_i is modelled as vMF on the ball of radius |g(Y_i)| + ||eps_i||
    with concentration theta_n r_i Phi_i; once the radius and normalizer
    terms are dropped this is theta_n <beta, v_hat(y)>. Rows of a 2-d beta
    are scored independently.
    """
    eps_norms = np.asarray(eps_norms, dtype=float).ravel()
    if eps_norms.shape[0] != data.n or np.any(eps_norms < 0):
        raise DomainError("eps_norms must hold n non-negative values")
    coords = beta.coords if isinstance(beta, Direction) else np.asarray(beta, dtype=float)
    scores = theta_n * (coords @ v_hat(y, data))
    return float(scores) if np.ndim(scores) == 0 else scores
