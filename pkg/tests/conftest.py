import numpy as np
import pytest

from sepals.models import Dataset, Direction, FitResult, SimConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def toy_data():
    """Y = (1, 3, 5) with rows chosen so that v_hat(2) = (-2/9, 2/9)."""
    X = np.array([[7.0, 7.0], [1.0, 0.0], [0.0, 1.0]])
    Y = np.array([1.0, 3.0, 5.0])
    return Dataset(X, Y)


@pytest.fixture
def noiseless_config():
    return SimConfig(n=500, p=10, snr=1e12, seed=11)


@pytest.fixture
def study_config():
    """n=500, p=30, c=1, Kendall tau 0.2."""
    return SimConfig(n=500, p=30, c=1.0, theta=0.5, seed=2023)


def random_unit(rng, size, p):
    u = rng.standard_normal((size, p))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def random_fit(rng, p):
    beta = Direction.from_vector(rng.standard_normal(p))
    v_norm = float(rng.uniform(0.5, 5.0))
    return FitResult(beta=beta, y_threshold=1.0, k=10, v_norm=v_norm, K_n=v_norm)
