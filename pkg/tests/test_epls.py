import math

import numpy as np
import pytest

from sepals.estimators.epls import (
    ball_loglik,
    empirical_survival,
    fit_epls,
    fit_epls_at,
    phi_weights,
    threshold_from_k,
    truncated_mean,
    v_hat,
)
from sepals.exceptions import BadThreshold, DegenerateDirection, DomainError
from sepals.models import Dataset, Direction
from sepals.simulation import simulate_dataset

from .conftest import random_unit


class TestDataset:
    def test_rejects_mismatched_lengths(self):
        with pytest.raises(DomainError):
            Dataset(np.ones((3, 2)), np.ones(4))

    def test_rejects_non_finite(self):
        X = np.ones((3, 2))
        X[1, 1] = np.nan
        with pytest.raises(DomainError):
            Dataset(X, np.ones(3))

    def test_rejects_single_covariate(self):
        with pytest.raises(DomainError):
            Dataset(np.ones((3, 1)), np.ones(3))

    def test_is_read_only(self, toy_data):
        with pytest.raises(ValueError):
            toy_data.X[0, 0] = 1.0

    def test_default_column_names(self, toy_data):
        assert toy_data.columns == ("x1", "x2")

    def test_standardized_keeps_location(self, toy_data):
        scaled = toy_data.standardized()
        np.testing.assert_allclose(scaled.X.std(axis=0), 1.0)
        np.testing.assert_allclose(scaled.X * toy_data.X.std(axis=0), toy_data.X)
        np.testing.assert_array_equal(scaled.Y, toy_data.Y)

    def test_standardized_constant_column(self):
        data = Dataset(np.array([[1.0, 2.0], [1.0, 4.0], [1.0, 6.0]]), np.ones(3))
        np.testing.assert_array_equal(data.standardized().X[:, 0], 1.0)

    def test_lower_tail(self, toy_data):
        np.testing.assert_allclose(toy_data.lower_tail().Y, [1.0, 1 / 3, 1 / 5])

    def test_lower_tail_needs_positive_response(self):
        with pytest.raises(DomainError):
            Dataset(np.ones((2, 2)), [1.0, 0.0]).lower_tail()


class TestExceedanceMoments:
    def test_survival_at_minimum(self):
        assert empirical_survival(1.0, [1.0, 3.0, 5.0]) == 1.0

    def test_survival_above_maximum(self):
        assert empirical_survival(6.0, [1.0, 3.0, 5.0]) == 0.0

    def test_survival_counts_inclusively(self):
        assert empirical_survival(2.0, [1.0, 3.0, 5.0]) == pytest.approx(2 / 3)
        assert empirical_survival(3.0, [1.0, 3.0, 5.0]) == pytest.approx(2 / 3)

    def test_truncated_mean(self):
        assert truncated_mean(2.0, [1.0, 3.0, 5.0]) == pytest.approx(8 / 3)
        assert truncated_mean(0.0, [1.0, 3.0, 5.0]) == pytest.approx(3.0)
        assert truncated_mean(9.0, [1.0, 3.0, 5.0]) == 0.0

    def test_phi_weights(self):
        np.testing.assert_allclose(phi_weights(2.0, [1.0, 3.0, 5.0]), [0.0, -2 / 9, 2 / 9], atol=1e-15)

    def test_single_exceedance_weight_is_zero(self):
        assert np.all(phi_weights(5.0, [1.0, 3.0, 5.0]) == 0.0)

    def test_weights_sum_to_zero_on_full_sample(self, rng):
        Y = rng.pareto(5.0, size=200) + 1
        assert phi_weights(Y.min(), Y).sum() == pytest.approx(0.0, abs=1e-12)

    def test_weights_vanish_off_exceedances(self, rng):
        Y = rng.standard_normal(100)
        y = np.quantile(Y, 0.8)
        assert np.all(phi_weights(y, Y)[Y < y] == 0.0)

    def test_empty_response(self):
        with pytest.raises(DomainError):
            empirical_survival(0.0, [])


class TestVHat:
    def test_toy_example(self, toy_data):
        np.testing.assert_allclose(v_hat(2.0, toy_data), [-2 / 9, 2 / 9], atol=1e-15)

    def test_no_exceedances(self, toy_data):
        assert np.all(v_hat(10.0, toy_data) == 0.0)

    def test_shift_invariant_on_full_sample(self, rng):
        X = rng.standard_normal((50, 4))
        Y = rng.standard_normal(50)
        shift = np.array([3.0, -1.0, 0.5, 2.0])
        base = v_hat(Y.min(), Dataset(X, Y))
        shifted = v_hat(Y.min(), Dataset(X + shift, Y))
        np.testing.assert_allclose(shifted, base, atol=1e-12)


class TestFit:
    def test_toy_fit(self, toy_data):
        fit = fit_epls(toy_data, 2)
        np.testing.assert_allclose(fit.beta.coords, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
        assert fit.v_norm == pytest.approx(2 * math.sqrt(2) / 9)
        assert fit.y_threshold == 3.0
        assert fit.k == 2
        assert fit.K_n == pytest.approx(fit.v_norm)

    def test_k_one_is_degenerate(self, toy_data):
        with pytest.raises(DegenerateDirection):
            fit_epls(toy_data, 1)

    def test_tied_exceedances_are_degenerate(self):
        data = Dataset(np.arange(8.0).reshape(4, 2), np.array([1.0, 2.0, 7.0, 7.0]))
        with pytest.raises(DegenerateDirection):
            fit_epls(data, 2)

    @pytest.mark.parametrize("k", [0, 4])
    def test_bad_k(self, toy_data, k):
        with pytest.raises(BadThreshold):
            fit_epls(toy_data, k)

    def test_ties_raise_effective_count(self, rng):
        X = rng.standard_normal((6, 3))
        Y = np.array([1.0, 2.0, 4.0, 4.0, 4.0, 9.0])
        fit = fit_epls(Dataset(X, Y), 2)
        assert fit.y_threshold == 4.0
        assert fit.k == 4

    def test_threshold_from_k(self):
        assert threshold_from_k([5.0, 1.0, 3.0], 2) == 3.0

    def test_theta_n_scales_K_n(self, toy_data):
        assert fit_epls(toy_data, 2, theta_n=3.0).K_n == pytest.approx(3 * fit_epls(toy_data, 2).K_n)

    def test_explicit_threshold(self, toy_data):
        assert fit_epls_at(toy_data, 3.0) == fit_epls(toy_data, 2)

    def test_scale_equivariance(self, study_config):
        data = simulate_dataset(study_config).data
        scaled = Dataset(4.5 * data.X, data.Y)
        np.testing.assert_allclose(fit_epls(scaled, 40).beta.coords, fit_epls(data, 40).beta.coords, atol=1e-12)

    def test_sign_coherence(self, study_config):
        data = simulate_dataset(study_config).data
        fit = fit_epls(data, 40)
        np.testing.assert_allclose(fit.v_norm * fit.beta.coords, v_hat(fit.y_threshold, data), atol=1e-12)

    def test_deterministic(self, study_config):
        data = simulate_dataset(study_config).data
        assert fit_epls(data, 60) == fit_epls(data, 60)

    def test_noiseless_recovers_direction(self, noiseless_config):
        data = simulate_dataset(noiseless_config).data
        fit = fit_epls(data, 50)
        assert fit.beta.dot(noiseless_config.beta) ** 2 >= 1 - 1e-6

    @pytest.mark.monte_carlo
    def test_recovers_direction_on_average(self, study_config):
        scores = [
            fit_epls(simulate_dataset(study_config, r).data, 50).beta.dot(study_config.beta) ** 2 for r in range(100)
        ]
        assert np.mean(scores) >= 0.75


class TestBallLikelihood:
    @pytest.fixture
    def sample(self, study_config):
        return simulate_dataset(study_config)

    def test_maximum_at_epls_direction(self, sample):
        fit = fit_epls(sample.data, 50)
        value = ball_loglik(fit.beta, sample.data, fit.y_threshold, 1.0, sample.eps_norms)
        assert value == pytest.approx(fit.v_norm, rel=1e-12)

    def test_minimum_at_antipode(self, sample):
        fit = fit_epls(sample.data, 50)
        value = ball_loglik(-fit.beta, sample.data, fit.y_threshold, 2.0, sample.eps_norms)
        assert value == pytest.approx(-2 * fit.v_norm, rel=1e-12)

    def test_random_search_never_beats_fit(self, sample, rng):
        fit = fit_epls(sample.data, 50)
        best = ball_loglik(fit.beta, sample.data, fit.y_threshold, 1.0, sample.eps_norms)
        candidates = random_unit(rng, 10**4, sample.data.p)
        scores = ball_loglik(candidates, sample.data, fit.y_threshold, 1.0, sample.eps_norms)
        assert np.all(scores <= best + 1e-15)

    def test_rejects_inconsistent_norms(self, sample):
        beta = Direction.basis(sample.data.p, 0)
        with pytest.raises(DomainError):
            ball_loglik(beta, sample.data, 1.0, 1.0, np.ones(3))
