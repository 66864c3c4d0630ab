import math

import numpy as np
import pytest
from scipy import special

from utils.constants import KL_SENTINEL
from utils.exceptions import NumericDomainError
from utils.numerics import digamma, is_prob_vector, kl_divergence, log_sum_exp, normalize_log_rows


class TestDigamma:

    def test_known_values(self):
        assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-12)
        assert digamma(0.5) == pytest.approx(-1.9635100260214235, abs=1e-12)
        assert digamma(2.0) == pytest.approx(1.0 - 0.5772156649015329, abs=1e-12)

    def test_matches_scipy_on_log_grid(self):
        x = np.logspace(-3, 4, 1000)
        np.testing.assert_allclose(digamma(x), special.digamma(x), rtol=1e-11, atol=1e-11)

    def test_bracketing(self):
        x = np.logspace(0, 4, 1000) + 0.5
        values = digamma(x)
        assert np.all(np.log(x - 0.5) < values)
        assert np.all(values < np.log(x))

    def test_recurrence(self):
        x = np.linspace(0.1, 30, 200)
        np.testing.assert_allclose(digamma(x + 1), digamma(x) + 1.0 / x, atol=1e-11)

    def test_scalar_returns_float(self):
        assert isinstance(digamma(3.0), float)

    @pytest.mark.parametrize('bad', [0.0, -1.0, [1.0, 0.0]])
    def test_rejects_non_positive(self, bad):
        with pytest.raises(NumericDomainError):
            digamma(bad)

    def test_domain_error_is_value_error(self):
        with pytest.raises(ValueError):
            digamma(-2.0)


class TestLogSumExp:

    def test_shift_invariance(self):
        v = np.array([1000.0, 1000.0])
        assert log_sum_exp(v) == pytest.approx(1000.0 + math.log(2.0))

    def test_very_negative(self):
        assert log_sum_exp([-1e308, 0.0]) == pytest.approx(0.0)

    def test_empty(self):
        with pytest.raises(NumericDomainError):
            log_sum_exp([])

    def test_axis(self):
        m = np.log(np.array([[1.0, 3.0], [2.0, 2.0]]))
        np.testing.assert_allclose(log_sum_exp(m, axis=1), np.log([4.0, 4.0]))


class TestNormalizeRows:

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(0)
        probs = normalize_log_rows(rng.normal(scale=50, size=(20, 4)))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)

    def test_extreme_weights(self):
        probs = normalize_log_rows([[0.0, -1e6]])
        np.testing.assert_allclose(probs, [[1.0, 0.0]])

    def test_empty_matrix(self):
        assert normalize_log_rows(np.zeros((0, 3))).shape == (0, 3)


class TestKL:

    def test_identical(self):
        assert kl_divergence([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_binary_closed_form(self):
        assert kl_divergence([0.8, 0.2], [0.2, 0.8]) == pytest.approx(0.6 * math.log(4.0), abs=1e-12)

    def test_zero_support(self):
        assert kl_divergence([0.5, 0.5], [1.0, 0.0]) == KL_SENTINEL

    def test_zero_in_p_is_fine(self):
        assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2.0))

    def test_length_mismatch(self):
        with pytest.raises(NumericDomainError):
            kl_divergence([0.5, 0.5], [1.0])


def test_is_prob_vector():
    assert is_prob_vector([0.25, 0.75])
    assert not is_prob_vector([0.5, 0.6])
    assert not is_prob_vector([1.2, -0.2])
