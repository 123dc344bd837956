"""Similarity and conditional tail-correlation measures, plus the sweep entry points."""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np
import numpy.typing as npt
import pandas as pd

from sepals.config import JOBS, THETA_N
from sepals.estimators import fit_epls, sparse_map
from sepals.exceptions import NUMERICAL_ERRORS, DegenerateSubsample, DomainError
from sepals.models import Dataset, Direction, SimConfig, SweepResult
from sepals.workers.sweep import ReplicationPool, SweepRunner, map_shift, zero_pattern

MIN_EXCEEDANCES = 3
# spread below this fraction of the subsample scale counts as zero variance
VARIANCE_RTOL = 1e-9


class TailCorrGrid(NamedTuple):
    frame: pd.DataFrame
    best_k: int | None
    best_lambda: float | None
    best_rho: float | None


def similarity_r(estimates: Sequence[Direction], beta_true: Direction) -> float:
    """Mean squared inner product between estimates and the true direction."""
    if not estimates:
        raise DomainError("similarity needs at least one estimate")
    coords = np.stack([d.coords for d in estimates])
    return float(np.mean((coords @ beta_true.coords) ** 2))


def orthogonal_projection(beta: Direction, v: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """P_beta_perp(v) = v - <v, beta> beta."""
    v = np.asarray(v, dtype=float)
    return v - (v @ beta.coords) * beta.coords


def _pearson(a: npt.NDArray[np.float64], b: npt.NDArray[np.float64], scale_a: float, scale_b: float) -> float:
    if a.std() <= VARIANCE_RTOL * scale_a or b.std() <= VARIANCE_RTOL * scale_b:
        raise DegenerateSubsample("zero variance on the exceedance subsample")
    return float(np.corrcoef(a, b)[0, 1])


def _exceedances(data: Dataset, y: float) -> npt.NDArray[np.bool_]:
    exceed = data.Y >= y
    if np.count_nonzero(exceed) < MIN_EXCEEDANCES:
        raise DegenerateSubsample(f"fewer than {MIN_EXCEEDANCES} exceedances above y={y:g}")
    return exceed


def tail_corr_y(data: Dataset, beta: Direction, y: float) -> float:
    """Pearson correlation of <X, beta> and Y over {Y >= y}."""
    exceed = _exceedances(data, y)
    X, Y = data.X[exceed], data.Y[exceed]
    return _pearson(X @ beta.coords, Y, float(np.abs(X).max()), float(np.abs(Y).max()))


def tail_corr_x(data: Dataset, beta: Direction, y: float, j: int) -> float:
    """Pearson correlation of <X, beta> and the coordinate X_j over {Y >= y}."""
    if not 0 <= j < data.p:
        raise DomainError(f"coordinate index {j!r} out of range for p={data.p}")
    exceed = _exceedances(data, y)
    X = data.X[exceed]
    scale = float(np.abs(X).max())
    return _pearson(X @ beta.coords, X[:, j], scale, scale)


def tail_corr_grid(
    data: Dataset,
    lambda_grid: Sequence[float],
    k_grid: Sequence[int],
    theta_n: float = THETA_N,
) -> TailCorrGrid:
    """Tail correlation with Y of the sparse MAP over a (k, lambda) grid.

    Degenerate cells keep an empty rho and a set flag.
    """
    rows = []
    for k in k_grid:
        try:
            fit = fit_epls(data, int(k), theta_n)
        except NUMERICAL_ERRORS:
            fit = None
        for lam in lambda_grid:
            rho = np.nan
            if fit is not None:
                try:
                    rho = tail_corr_y(data, sparse_map(fit, float(lam)), fit.y_threshold)
                except NUMERICAL_ERRORS:
                    pass
            rows.append({"k": int(k), "lambda": float(lam), "rho_y": rho, "degenerate": int(np.isnan(rho))})
    frame = pd.DataFrame(rows, columns=["k", "lambda", "rho_y", "degenerate"])
    if frame["rho_y"].notna().any():
        best = frame.loc[frame["rho_y"].idxmax()]
        return TailCorrGrid(frame, int(best["k"]), float(best["lambda"]), float(best["rho_y"]))
    return TailCorrGrid(frame, None, None, None)


def tail_corr_coordinates(
    data: Dataset,
    lam: float,
    k_grid: Sequence[int],
    theta_n: float = THETA_N,
    beta: Direction | None = None,
) -> pd.DataFrame:
    """Tail correlation of the sparse MAP with every covariate, for each k.

    A fixed beta bypasses the fit; only the threshold then depends on k.
    """
    rows = []
    for k in k_grid:
        try:
            fit = fit_epls(data, int(k), theta_n)
            direction = beta if beta is not None else sparse_map(fit, lam)
        except NUMERICAL_ERRORS:
            rows.extend({"k": int(k), "j": j + 1, "rho_xj": np.nan, "degenerate": 1} for j in range(data.p))
            continue
        for j in range(data.p):
            try:
                rho = tail_corr_x(data, direction, fit.y_threshold, j)
            except NUMERICAL_ERRORS:
                rho = np.nan
            rows.append({"k": int(k), "j": j + 1, "rho_xj": rho, "degenerate": int(np.isnan(rho))})
    return pd.DataFrame(rows, columns=["k", "j", "rho_xj", "degenerate"])


def run_sweep(
    config: SimConfig,
    prior_family: str,
    hyper_grid: Sequence[float],
    mu0: Direction | None,
    k_grid: Sequence[int],
    N: int,
    theta_n: float = THETA_N,
    jobs: int = JOBS,
    progress: bool = False,
) -> SweepResult:
    """Monte Carlo similarity R over a (hyperparameter, k) grid."""
    runner = SweepRunner(config, prior_family, hyper_grid, k_grid, N, mu0, theta_n, jobs, progress)
    return runner.run()


def support_recovery(
    config: SimConfig, lam: float, k: int, N: int, theta_n: float = THETA_N, jobs: int = JOBS
) -> npt.NDArray[np.float64]:
    """Per-coordinate frequency of exact zeros of the sparse MAP over N replications."""
    patterns = ReplicationPool(jobs).map(zero_pattern, N, config, lam, k, theta_n)
    return np.nanmean(patterns, axis=0)


def mean_map_shift(
    config: SimConfig, mu0: Direction, kappa0: float, k: int, N: int, theta_n: float = THETA_N, jobs: int = JOBS
) -> npt.NDArray[np.float64]:
    """Mean of (conjugate MAP - EPLS direction) over N replications."""
    shifts = ReplicationPool(jobs).map(map_shift, N, config, mu0, kappa0, k, theta_n)
    return np.nanmean(shifts, axis=0)
