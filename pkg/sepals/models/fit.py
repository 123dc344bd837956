from __future__ import annotations

from dataclasses import dataclass

from .direction import Direction

__all__ = ["FitResult"]


@dataclass(frozen=True)
class FitResult:
    beta: Direction
    y_threshold: float
    k: int
    v_norm: float
    K_n: float
    theta_n: float = 1.0

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.tolist(),
            "k_effective": self.k,
            "y_threshold": self.y_threshold,
            "v_norm": self.v_norm,
            "K_n": self.K_n,
            "theta_n": self.theta_n,
        }
