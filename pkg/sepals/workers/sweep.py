from __future__ import annotations

import warnings
from typing import Callable, Sequence

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed
from tqdm import tqdm

from sepals.config import FAILURE_FLAG_RATE, JOBS, THETA_N
from sepals.estimators import conjugate_map, fit_epls, map_direction, sparse_map
from sepals.exceptions import BadThreshold, DegenerateDirection, DomainError, OverShrunk, UsageError
from sepals.logger import get_logger
from sepals.models import ConjugatePrior, Direction, NoPrior, Prior, SimConfig, SparsePrior, SweepResult
from sepals.simulation import simulate_dataset

logger = get_logger("sepals.sweep")

FIT_FAILURES = (DegenerateDirection, OverShrunk)


def make_prior(family: str, hyper: float, mu0: Direction | None = None, theta_n: float = THETA_N) -> Prior:
    if family == "conjugate":
        if mu0 is None:
            raise UsageError("the conjugate prior needs a location mu0")
        return ConjugatePrior(mu0=mu0, kappa0=hyper, theta_n=theta_n)
    if family == "sparse":
        return SparsePrior(lam=hyper, theta_n=theta_n)
    if family == "none":
        return NoPrior(theta_n=theta_n)
    raise UsageError(f"unknown prior family {family!r}")


def similarity_table(
    config: SimConfig,
    priors: Sequence[Prior],
    k_grid: Sequence[int],
    replication: int,
) -> npt.NDArray[np.float64]:
    """<beta_map, beta>^2 for every (prior, k) on one replication; NaN marks a failed fit."""
    data = simulate_dataset(config, replication).data
    table = np.full((len(priors), len(k_grid)), np.nan)
    theta_n = priors[0].theta_n
    for j, k in enumerate(k_grid):
        try:
            fit = fit_epls(data, int(k), theta_n)
        except DegenerateDirection:
            continue
        for i, prior in enumerate(priors):
            try:
                table[i, j] = map_direction(fit, prior).dot(config.beta) ** 2
            except FIT_FAILURES:
                pass
    return table


def zero_pattern(config: SimConfig, lam: float, k: int, theta_n: float, replication: int) -> npt.NDArray[np.float64]:
    """1.0 where the sparse MAP coordinate is exactly zero; NaN row on failure."""
    data = simulate_dataset(config, replication).data
    try:
        direction = sparse_map(fit_epls(data, k, theta_n), lam)
    except FIT_FAILURES:
        return np.full(config.p, np.nan)
    return (direction.coords == 0).astype(float)


def map_shift(
    config: SimConfig, mu0: Direction, kappa0: float, k: int, theta_n: float, replication: int
) -> npt.NDArray[np.float64]:
    """beta_map - beta_ml under the conjugate prior; NaN row on failure."""
    data = simulate_dataset(config, replication).data
    try:
        fit = fit_epls(data, k, theta_n)
        direction, _ = conjugate_map(fit, mu0, kappa0)
    except FIT_FAILURES:
        return np.full(config.p, np.nan)
    return direction.coords - fit.beta.coords


class ReplicationPool:
    """Runs one task per replication and returns the results in replication order.

    Every replication draws from its own (seed, replication) stream, so the
    output does not depend on the number of jobs.
    """

    def __init__(self, jobs: int = JOBS, progress: bool = False):
        if jobs == 0:
            raise DomainError("jobs must be a positive count, or negative to count back from all cores")
        self.jobs = jobs
        self.progress = progress

    def map(self, task: Callable[..., npt.NDArray[np.float64]], replications: int, *args) -> npt.NDArray[np.float64]:
        if replications < 1:
            raise DomainError(f"need at least one replication, got {replications!r}")
        indices = tqdm(range(replications), disable=not self.progress, desc="replications")
        if self.jobs == 1:
            results = [task(*args, r) for r in indices]
        else:
            results = Parallel(n_jobs=self.jobs)(delayed(task)(*args, r) for r in indices)
        return np.stack(results)


class SweepRunner:
    def __init__(
        self,
        config: SimConfig,
        family: str,
        hyper_grid: Sequence[float],
        k_grid: Sequence[int],
        replications: int,
        mu0: Direction | None = None,
        theta_n: float = THETA_N,
        jobs: int = JOBS,
        progress: bool = False,
    ):
        self.config = config
        self.family = family
        self.hyper_grid = np.asarray(hyper_grid if family != "none" else [0.0], dtype=float)
        self.k_grid = np.asarray(k_grid, dtype=np.int64)
        self.replications = replications
        self.priors = [make_prior(family, h, mu0, theta_n) for h in self.hyper_grid]
        self.pool = ReplicationPool(jobs, progress)
        self._validate()

    def _validate(self) -> None:
        if self.k_grid.size == 0 or self.hyper_grid.size == 0:
            raise UsageError("k and hyperparameter grids must not be empty")
        if self.k_grid.min() < 1 or self.k_grid.max() > self.config.n:
            raise BadThreshold(f"k grid must lie in [1, {self.config.n}]")

    @property
    def tag(self) -> str:
        return f"[sweep seed={self.config.seed} family={self.family}]"

    def run(self) -> SweepResult:
        logger.info(
            f"{self.tag} {self.replications} replications x {self.hyper_grid.size} hyper x "
            f"{self.k_grid.size} k on {self.pool.jobs} job(s)"
        )
        tables = self.pool.map(similarity_table, self.replications, self.config, self.priors, self.k_grid)
        result = self._reduce(tables)

        flagged = np.argwhere(result.flagged)
        if flagged.size:
            logger.warning(
                f"{self.tag} {len(flagged)} cell(s) with more than {FAILURE_FLAG_RATE:.0%} failed fits, "
                f"first at hyper={self.hyper_grid[flagged[0][0]]:g} k={self.k_grid[flagged[0][1]]}"
            )
        return result

    def _reduce(self, tables: npt.NDArray[np.float64]) -> SweepResult:
        failures = np.isnan(tables).sum(axis=0)
        with warnings.catch_warnings():
            warnings.filterwarnings("ignore", category=RuntimeWarning)
            mean = np.nanmean(tables, axis=0)
            q05, q95 = np.nanquantile(tables, [0.05, 0.95], axis=0, method="inverted_cdf")
        # order statistics may fall on one side of a skewed mean
        q05 = np.fmin(q05, mean)
        q95 = np.fmax(q95, mean)
        return SweepResult(
            family=self.family,
            k_grid=self.k_grid,
            hyper_grid=self.hyper_grid,
            mean_R=mean,
            q05_R=q05,
            q95_R=q95,
            failures=failures,
            replications=self.replications,
        )
