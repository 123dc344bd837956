"""Heavy-tail diagnostics: Hill estimator, Hill plot and log-excess QQ data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.stats import norm

from sepals.exceptions import BadThreshold, NonPositiveTail

Z_975 = float(norm.ppf(0.975))


@dataclass(frozen=True, eq=False)
class HillCurve:
    k_values: npt.NDArray[np.int64]
    gamma_hat: npt.NDArray[np.float64]
    ci_low: npt.NDArray[np.float64]
    ci_high: npt.NDArray[np.float64]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"k": self.k_values, "gamma_hat": self.gamma_hat, "ci_low": self.ci_low, "ci_high": self.ci_high}
        )


@dataclass(frozen=True, eq=False)
class QQData:
    """Points (log(k/i), log(Y_{n-i+1,n} / Y_{n-k,n})) for i = 1..k."""

    x: npt.NDArray[np.float64]
    y: npt.NDArray[np.float64]
    slope: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "y": self.y})


def _log_top(Y: npt.ArrayLike, k: int) -> npt.NDArray[np.float64]:
    """Logs of the k + 1 largest values, in decreasing order."""
    Y = np.asarray(Y, dtype=float).ravel()
    n = Y.size
    if not 1 <= k <= n - 1:
        raise BadThreshold(f"k must lie in [1, {n - 1}], got {k!r}")
    top = np.sort(Y, kind="stable")[::-1][: k + 1]
    if top[k] <= 0:
        raise NonPositiveTail(f"order statistic Y_(n-{k}) = {top[k]!r} is not positive")
    return np.log(top)


def hill(Y: npt.ArrayLike, k: int) -> float:
    log_top = _log_top(Y, k)
    return float(np.mean(log_top[:k]) - log_top[k])


def hill_curve(Y: npt.ArrayLike, k_max: int) -> HillCurve:
    """Hill estimates for k = 1..k_max with band gamma (1 +- z_0.975 / sqrt(k))."""
    n = np.asarray(Y).size
    if not 2 <= k_max <= n - 1:
        raise BadThreshold(f"k_max must lie in [2, {n - 1}], got {k_max!r}")
    log_top = _log_top(Y, k_max)
    k = np.arange(1, k_max + 1)
    gamma_hat = np.cumsum(log_top[:k_max]) / k - log_top[1 : k_max + 1]
    half_width = Z_975 / np.sqrt(k)
    return HillCurve(
        k_values=k,
        gamma_hat=gamma_hat,
        ci_low=gamma_hat * (1 - half_width),
        ci_high=gamma_hat * (1 + half_width),
    )


def qq_data(Y: npt.ArrayLike, k: int) -> QQData:
    """Log-excesses against unit-exponential quantiles, with the slope of
    the least-squares line through the origin (a tail-index estimate)."""
    log_top = _log_top(Y, k)
    i = np.arange(1, k + 1)
    x = np.log(k / i)
    y = log_top[:k] - log_top[k]
    denom = float(x @ x)
    slope = float(x @ y) / denom if denom > 0 else 0.0
    return QQData(x=x, y=y, slope=slope)


def freedman_diaconis_histogram(Y: npt.ArrayLike) -> pd.DataFrame:
    Y = np.asarray(Y, dtype=float).ravel()
    edges = np.histogram_bin_edges(Y, bins="fd")
    counts, edges = np.histogram(Y, bins=edges)
    return pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "count": counts})
