from __future__ import annotations

from dataclasses import dataclass

from sepals.exceptions import DomainError

from .direction import Direction

__all__ = ["Prior", "NoPrior", "ConjugatePrior", "SparsePrior", "PRIOR_FAMILIES"]


@dataclass(frozen=True, kw_only=True)
class Prior:
    theta_n: float = 1.0

    family = "none"

    def __post_init__(self) -> None:
        if not self.theta_n > 0:
            raise DomainError(f"theta_n must be positive, got {self.theta_n!r}")

    @property
    def hyper(self) -> float:
        return 0.0

    def to_dict(self) -> dict:
        return {"family": self.family, "theta_n": self.theta_n}


@dataclass(frozen=True, kw_only=True)
class NoPrior(Prior):
    """Uniform prior on the sphere; the MAP is the EPLS direction."""


@dataclass(frozen=True, kw_only=True)
class ConjugatePrior(Prior):
    mu0: Direction
    kappa0: float

    family = "conjugate"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.kappa0 >= 0:
            raise DomainError(f"kappa0 must be non-negative, got {self.kappa0!r}")

    @property
    def hyper(self) -> float:
        return self.kappa0

    def to_dict(self) -> dict:
        return {**super().to_dict(), "kappa0": self.kappa0, "mu0": self.mu0.tolist()}


@dataclass(frozen=True, kw_only=True)
class SparsePrior(Prior):
    lam: float

    family = "sparse"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.lam >= 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam!r}")

    @property
    def hyper(self) -> float:
        return self.lam

    def to_dict(self) -> dict:
        return {**super().to_dict(), "lambda": self.lam}


PRIOR_FAMILIES = ("none", "conjugate", "sparse")
