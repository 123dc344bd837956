import math

import numpy as np
import pytest
from scipy.special import gammaln, iv, ive

from sepals.estimators.vmf import BallVmfParams, bessel_i, log_bessel_i, log_c_p, logpdf_ball, logpdf_sphere
from sepals.exceptions import DomainError


class TestBessel:
    def test_order_zero_at_origin(self):
        assert bessel_i(0, 0) == 1.0

    def test_positive_order_at_origin(self):
        assert bessel_i(1, 0) == 0.0

    def test_order_zero_at_one(self):
        assert bessel_i(0, 1) == pytest.approx(1.2660658777520082, rel=1e-12)

    @pytest.mark.parametrize("q", [0, 0.5, 1, 2, 7.5, 14])
    @pytest.mark.parametrize("kappa", [1e-6, 0.3, 1, 5, 40, 250])
    def test_matches_scipy(self, q, kappa):
        assert bessel_i(q, kappa) == pytest.approx(iv(q, kappa), rel=1e-12)

    @pytest.mark.parametrize("q", [1, 2])
    @pytest.mark.parametrize("kappa", [0.5, 1, 5])
    def test_recurrence(self, q, kappa):
        lhs = bessel_i(q - 1, kappa) - bessel_i(q + 1, kappa)
        rhs = 2 * q / kappa * bessel_i(q, kappa)
        assert lhs == pytest.approx(rhs, rel=1e-10)

    @pytest.mark.parametrize("q", [0, 3.5, 149])
    def test_log_space_for_large_kappa(self, q):
        kappa = 900.0
        expected = math.log(ive(q, kappa)) + kappa
        assert log_bessel_i(q, kappa) == pytest.approx(expected, rel=1e-12)

    def test_log_matches_direct(self):
        assert log_bessel_i(2.5, 3.0) == pytest.approx(math.log(bessel_i(2.5, 3.0)), abs=1e-13)

    @pytest.mark.parametrize("q, kappa", [(-1, 1.0), (0, -0.5)])
    def test_domain(self, q, kappa):
        with pytest.raises(DomainError):
            bessel_i(q, kappa)


class TestNormalizer:
    def test_uniform_on_two_sphere(self):
        assert log_c_p(3, 0) == pytest.approx(math.log(1 / (4 * math.pi)), abs=1e-14)
        assert log_c_p(3, 0) == pytest.approx(-2.53102, abs=1e-5)

    def test_uniform_on_circle(self):
        assert log_c_p(2, 0) == pytest.approx(math.log(1 / (2 * math.pi)), abs=1e-14)

    @pytest.mark.parametrize("p", [2, 3, 10])
    def test_continuous_at_zero(self, p):
        assert abs(log_c_p(p, 1e-8) - log_c_p(p, 0)) < 1e-6

    @pytest.mark.parametrize("p", [2, 3, 10, 300])
    def test_strictly_decreasing(self, p):
        values = [log_c_p(p, kappa) for kappa in np.linspace(0, 50, 101)]
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("p", [3, 10])
    def test_closed_form_for_positive_kappa(self, p):
        kappa = 2.5
        expected = (p / 2 - 1) * math.log(kappa) - (p / 2) * math.log(2 * math.pi) - math.log(iv(p / 2 - 1, kappa))
        assert log_c_p(p, kappa) == pytest.approx(expected, rel=1e-12)

    def test_rejects_dimension_one(self):
        with pytest.raises(DomainError):
            log_c_p(1, 1.0)


class TestSphereDensity:
    def test_uniform_at_location(self):
        mu = np.array([0.0, 0.0, 1.0])
        assert logpdf_sphere(mu, mu, 0.0) == pytest.approx(math.log(1 / (4 * math.pi)))

    def test_off_sphere(self):
        mu = np.array([1.0, 0.0, 0.0])
        assert logpdf_sphere(np.array([0.5, 0.0, 0.0]), mu, 1.0) == -math.inf

    def test_antisymmetry(self, rng):
        mu = np.array([0.6, 0.8, 0.0])
        x = rng.standard_normal(3)
        x /= np.linalg.norm(x)
        kappa = 3.2
        diff = logpdf_sphere(x, mu, kappa) - logpdf_sphere(-x, mu, kappa)
        assert diff == pytest.approx(2 * kappa * (mu @ x), abs=1e-12)

    def test_vectorized(self, rng):
        mu = np.array([1.0, 0.0])
        points = rng.standard_normal((5, 2))
        points /= np.linalg.norm(points, axis=1, keepdims=True)
        values = logpdf_sphere(points, mu, 1.5)
        assert values.shape == (5,)
        assert values[0] == pytest.approx(logpdf_sphere(points[0], mu, 1.5))

    def test_rejects_non_unit_location(self):
        with pytest.raises(DomainError):
            logpdf_sphere(np.array([1.0, 0.0]), np.array([1.0, 1.0]), 1.0)


class TestBallDensity:
    def test_uniform_disk(self):
        params = BallVmfParams(mu=np.array([1.0, 0.0]), r=1.0, kappa=0.0)
        assert logpdf_ball(np.array([0.3, -0.4]), params) == pytest.approx(math.log(1 / math.pi))

    def test_outside_support(self):
        params = BallVmfParams(mu=np.array([0.0, 1.0, 0.0]), r=2.0, kappa=1.0)
        assert logpdf_ball(np.array([0.0, 2.0 * (1 + 1e-3), 0.0]), params) == -math.inf

    @pytest.mark.parametrize(
        "mu, r, kappa",
        [(np.array([1.0, 0.0]), 0.0, 1.0), (np.array([1.0, 0.0]), 1.0, -1.0), (np.array([1.0, 1.0]), 1.0, 1.0)],
    )
    def test_invalid_params(self, mu, r, kappa):
        with pytest.raises(DomainError):
            BallVmfParams(mu=mu, r=r, kappa=kappa)

    def test_maximized_along_location(self, rng):
        mu = np.array([0.0, 0.6, 0.8])
        params = BallVmfParams(mu=mu, r=1.5, kappa=2.0)
        radius = 0.9
        best = logpdf_ball(radius * mu, params)
        others = rng.standard_normal((1000, 3))
        others = radius * others / np.linalg.norm(others, axis=1, keepdims=True)
        assert np.all(logpdf_ball(others, params) <= best)

    @pytest.mark.monte_carlo
    @pytest.mark.parametrize("p, r, kappa", [(2, 1.0, 0.0), (3, 2.0, 1.5), (5, 1.0, 4.0)])
    def test_integrates_to_one(self, rng, p, r, kappa):
        mu = np.zeros(p)
        mu[0] = 1.0
        params = BallVmfParams(mu=mu, r=r, kappa=kappa)
        size = 10**6
        directions = rng.standard_normal((size, p))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        # shrink radii by a hair so boundary round-off never leaves the ball
        radii = r * (1 - 1e-12) * rng.random(size) ** (1 / p)
        points = directions * radii[:, None]
        volume = math.exp((p / 2) * math.log(math.pi) + p * math.log(r) - gammaln(p / 2 + 1))
        values = volume * np.exp(logpdf_ball(points, params))
        error = values.std() / math.sqrt(size)
        # a constant integrand has no sampling error, only round-off
        assert abs(values.mean() - 1.0) <= max(3 * error, 1e-12)
