from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from sepals import config
from sepals.exceptions import DomainError

from .direction import Direction

__all__ = ["SimConfig", "default_direction"]


def default_direction(p: int) -> Direction:
    """(1, 1, 0, ..., 0) / sqrt(2)."""
    beta = np.zeros(p)
    beta[:2] = 1.0
    return Direction.from_vector(beta)


@dataclass(frozen=True)
class SimConfig:
    """Generative settings of the single-index inverse model X = Y^c beta + eps."""

    n: int = config.N_SAMPLES
    p: int = config.DIMENSION
    gamma_y: float = config.GAMMA_Y
    a: float = config.PARETO_SCALE
    c: float = config.LINK_EXPONENT
    theta: float = config.CLAYTON_THETA
    rotated: bool = False
    snr: float = config.SNR
    beta: Direction | None = None
    seed: int = config.SEED

    def __post_init__(self) -> None:
        if self.n < 2 or self.p < 2:
            raise DomainError(f"need n >= 2 and p >= 2, got n={self.n}, p={self.p}")
        if not 0 < self.gamma_y < 1:
            raise DomainError(f"gamma_y must lie in (0, 1), got {self.gamma_y!r}")
        if not (self.a > 0 and self.c > 0 and self.snr > 0):
            raise DomainError("scale, link exponent and snr must be positive")
        if not self.theta >= 0:
            raise DomainError(f"Clayton theta must be non-negative, got {self.theta!r}")
        if self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.beta is None:
            object.__setattr__(self, "beta", default_direction(self.p))
        elif self.beta.p != self.p:
            raise DomainError(f"beta has dimension {self.beta.p}, expected {self.p}")

    def to_dict(self) -> dict:
        params = asdict(self)
        params["beta"] = self.beta.tolist()
        return params
