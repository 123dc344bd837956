"""Data generator for the inverse single-index model X = g(Y) beta + eps.

Y is Pareto with survival (y / a)^(-1 / gamma_y), g(t) = t^c, and every
margin of eps is a half-Gaussian |N(0, sigma^2)| tied to F(Y) through a
(possibly rotated) Clayton copula in a one-factor construction.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.special import ndtri

from sepals.exceptions import DomainError
from sepals.logger import get_logger
from sepals.models import Dataset, Direction, SimConfig

logger = get_logger("sepals.simulate")

_BELOW_ONE = np.nextafter(1.0, 0.0)


class SimulatedSample(NamedTuple):
    data: Dataset
    factor: npt.NDArray[np.float64]
    eps_norms: npt.NDArray[np.float64]


def make_rng(seed: int, replication: int = 0) -> np.random.Generator:
    """Philox stream addressed by (seed, replication)."""
    sequence = np.random.SeedSequence(seed, spawn_key=(replication,))
    return np.random.Generator(np.random.Philox(sequence))


def pareto_quantile(u: npt.ArrayLike, gamma_y: float, a: float) -> float | npt.NDArray[np.float64]:
    """The y with survival F_bar(y) = u, i.e. a u^(-gamma_y)."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u > 1)):
        raise DomainError("Pareto quantile needs u in (0, 1]")
    y = a * u ** (-gamma_y)
    return float(y) if y.ndim == 0 else y


def link(t: npt.ArrayLike, c: float) -> npt.NDArray[np.float64]:
    return np.asarray(t, dtype=float) ** c


def sigma_from_snr(config: SimConfig) -> float:
    """Noise scale making g(F_bar^{-1}(1/n)) / sigma equal to the snr."""
    y_max = pareto_quantile(1.0 / config.n, config.gamma_y, config.a)
    return float(y_max**config.c / config.snr)


def clayton_conditional_cdf(u: npt.ArrayLike, v: npt.ArrayLike, theta: float) -> npt.NDArray[np.float64]:
    """dC_theta/dv (u, v) = v^(-theta-1) (u^-theta + v^-theta - 1)^(-1/theta - 1)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if theta == 0:
        return np.broadcast_to(u, np.broadcast(u, v).shape).astype(float)
    inner = np.log(u ** (-theta) + v ** (-theta) - 1.0)
    return np.exp(-(theta + 1) * np.log(v) - (1 / theta + 1) * inner)


def clayton_conditional_inverse(
    p_unif: npt.ArrayLike, v: npt.ArrayLike, theta: float
) -> float | npt.NDArray[np.float64]:
    """Invert u -> dC_theta/dv (u, v) at level p_unif.

    u = ((p^(-theta/(1+theta)) - 1) v^(-theta) + 1)^(-1/theta), evaluated in
    log space so that large theta does not overflow; theta = 0 is the
    independence copula.
    """
    p_unif = np.asarray(p_unif, dtype=float)
    v = np.asarray(v, dtype=float)
    if theta < 0:
        raise DomainError(f"Clayton theta must be non-negative, got {theta!r}")
    if np.any((p_unif <= 0) | (p_unif >= 1)) or np.any((v <= 0) | (v >= 1)):
        raise DomainError("conditional inverse needs p and v in the open unit interval")
    if theta == 0:
        u = np.broadcast_to(p_unif, np.broadcast(p_unif, v).shape).astype(float)
    else:
        log_a = np.log(np.expm1(-theta / (1 + theta) * np.log(p_unif)))
        u = np.exp(-np.logaddexp(log_a - theta * np.log(v), 0.0) / theta)
    return float(u) if u.ndim == 0 else u


def kendall_tau_clayton(theta: float, rotated: bool = False) -> float:
    if theta < 0:
        raise DomainError(f"Clayton theta must be non-negative, got {theta!r}")
    tau = theta / (theta + 2)
    return -tau if rotated else tau


def theta_from_kendall_tau(tau: float) -> tuple[float, bool]:
    """Clayton theta and rotation flag reaching Kendall's tau in (-1, 1)."""
    if not -1 < tau < 1:
        raise DomainError(f"Kendall's tau must lie in (-1, 1), got {tau!r}")
    magnitude = abs(tau)
    return 2 * magnitude / (1 - magnitude), tau < 0


def gaussian_quantile(u: npt.ArrayLike) -> float | npt.NDArray[np.float64]:
    """Standard normal quantile on (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError("Gaussian quantile needs u in the open unit interval")
    z = ndtri(u)
    return float(z) if z.ndim == 0 else z


def far_direction(p: int) -> Direction:
    """(1, ..., 1, 0, ..., 0) / sqrt(p/2): the first p // 2 coordinates set."""
    mu = np.zeros(p)
    mu[: p // 2] = 1.0
    return Direction.from_vector(mu)


def simulate_dataset(config: SimConfig, replication: int = 0) -> SimulatedSample:
    """Draw one dataset from the (seed, replication) substream of config.

    Returns the dataset, the copula factor v_i = F(Y_i) and the noise norms
    ||eps_i|| used as ball radii offsets.
    """
    rng = make_rng(config.seed, replication)
    n, p = config.n, config.p

    # uniforms live in (0, 1): Generator.random is [0, 1), so reflect
    U = 1.0 - rng.random(n)
    P = 1.0 - rng.random((n, p))
    P = np.minimum(P, _BELOW_ONE)

    Y = pareto_quantile(U, config.gamma_y, config.a)
    factor = np.clip(1.0 - U, np.finfo(float).tiny, _BELOW_ONE)

    W = clayton_conditional_inverse(P, factor[:, None], config.theta)
    if config.rotated:
        W = 1.0 - W
    W = np.clip(W, 0.0, _BELOW_ONE)

    sigma = sigma_from_snr(config)
    eps = sigma * ndtri((W + 1.0) / 2.0)
    X = link(Y, config.c)[:, None] * config.beta.coords + eps

    logger.debug(
        f"[simulate seed={config.seed} rep={replication}] n={n} p={p} sigma={sigma:.6g} "
        f"theta={config.theta} rotated={config.rotated}"
    )
    return SimulatedSample(Dataset(X, Y), factor, np.linalg.norm(eps, axis=1))
