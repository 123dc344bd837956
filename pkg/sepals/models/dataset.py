from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from sepals.exceptions import DomainError

__all__ = ["Dataset"]


@dataclass(frozen=True, eq=False)
class Dataset:
    """n observations of covariates X (n x p) and response Y (n,).

    Arrays are copied and frozen on construction.
    """

    X: npt.NDArray[np.float64]
    Y: npt.NDArray[np.float64]
    columns: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float).ravel()
        if X.ndim != 2:
            raise DomainError(f"X must be two-dimensional, got shape {X.shape}")
        n, p = X.shape
        if n < 2 or p < 2:
            raise DomainError(f"need n >= 2 and p >= 2, got n={n}, p={p}")
        if Y.shape[0] != n:
            raise DomainError(f"X has {n} rows but Y has {Y.shape[0]} entries")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            raise DomainError("dataset contains non-finite entries")
        columns = tuple(self.columns) or tuple(f"x{j + 1}" for j in range(p))
        if len(columns) != p:
            raise DomainError(f"{len(columns)} column names for {p} covariates")
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "columns", columns)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def standardized(self) -> Dataset:
        """Divide each covariate by its full-sample standard deviation (no centering)."""
        scale = self.X.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        return Dataset(self.X / scale, self.Y, self.columns)

    def lower_tail(self) -> Dataset:
        """Swap Y for 1/Y so that small responses become the upper tail."""
        if np.any(self.Y <= 0):
            raise DomainError("lower-tail analysis requires a positive response")
        return Dataset(self.X, 1.0 / self.Y, self.columns)
