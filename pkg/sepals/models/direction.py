from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from sepals.config import DEGENERATE_NORM, UNIT_NORM_TOL
from sepals.exceptions import DegenerateDirection, DomainError

__all__ = ["Direction"]


@dataclass(frozen=True, eq=False)
class Direction:
    """Unit vector in R^p."""

    coords: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        coords = np.array(self.coords, dtype=float).ravel()
        norm = float(np.linalg.norm(coords))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise DomainError(f"direction must have unit norm, got {norm!r}")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_vector(cls, vector: npt.ArrayLike) -> Direction:
        v = np.asarray(vector, dtype=float).ravel()
        norm = float(np.linalg.norm(v))
        if not np.isfinite(norm) or norm < DEGENERATE_NORM:
            raise DegenerateDirection(f"cannot normalize vector of norm {norm!r}")
        return cls(v / norm)

    @classmethod
    def basis(cls, p: int, j: int) -> Direction:
        e = np.zeros(p)
        e[j] = 1.0
        return cls(e)

    @property
    def p(self) -> int:
        return self.coords.shape[0]

    def dot(self, other: Direction | npt.ArrayLike) -> float:
        other_coords = other.coords if isinstance(other, Direction) else np.asarray(other, dtype=float)
        return float(self.coords @ other_coords)

    def __neg__(self) -> Direction:
        return Direction(-self.coords)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Direction):
            return NotImplemented
        return bool(np.array_equal(self.coords, other.coords))

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def tolist(self) -> list[float]:
        return self.coords.tolist()
