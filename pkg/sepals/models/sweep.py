from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pandas as pd

from sepals.config import FAILURE_FLAG_RATE
from sepals.exceptions import DomainError

__all__ = ["SweepResult", "SWEEP_COLUMNS"]

SWEEP_COLUMNS = ["family", "hyper", "k", "mean_r", "q05", "q95", "failures"]


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Similarity statistics over a (hyperparameter, k) grid.

    Matrices are indexed [hyper, k]; cells where every replication failed hold NaN.
    """

    family: str
    k_grid: npt.NDArray[np.int64]
    hyper_grid: npt.NDArray[np.float64]
    mean_R: npt.NDArray[np.float64]
    q05_R: npt.NDArray[np.float64]
    q95_R: npt.NDArray[np.float64]
    failures: npt.NDArray[np.int64]
    replications: int

    @property
    def flagged(self) -> npt.NDArray[np.bool_]:
        return self.failures > FAILURE_FLAG_RATE * self.replications

    def row(self, hyper: float) -> npt.NDArray[np.float64]:
        index = int(np.flatnonzero(self.hyper_grid == hyper)[0])
        return self.mean_R[index]

    def best_cell(self) -> tuple[float, int, float]:
        """(hyper, k, mean R) of the largest finite mean similarity among unflagged cells."""
        usable = np.where(self.flagged, np.nan, self.mean_R)
        if not np.isfinite(usable).any():
            raise DomainError(f"every cell of the {self.family} sweep is flagged or failed")
        i, j = np.unravel_index(np.nanargmax(usable), usable.shape)
        return float(self.hyper_grid[i]), int(self.k_grid[j]), float(self.mean_R[i, j])

    def to_frame(self) -> pd.DataFrame:
        hyper, k = np.meshgrid(self.hyper_grid, self.k_grid, indexing="ij")
        return pd.DataFrame(
            {
                "family": self.family,
                "hyper": hyper.ravel(),
                "k": k.ravel(),
                "mean_r": self.mean_R.ravel(),
                "q05": self.q05_R.ravel(),
                "q95": self.q95_R.ravel(),
                "failures": self.failures.ravel(),
            },
            columns=SWEEP_COLUMNS,
        )
