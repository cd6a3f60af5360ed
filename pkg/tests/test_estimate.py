import math
import warnings

import numpy as np
import pytest

from exgpd import specfun
from exgpd.distribution import ExGPD
from exgpd.estimate import (
    ConvergenceError,
    Method,
    _exgpd_score,
    _gpd_score,
    asymptotic_cov,
    exgpd_loglik,
    gpd_loglik,
    gpd_mle_fit,
    mle_fit,
    mme_fit,
    xi_from_log_variance,
)
from exgpd.gpd import Family, Params, SimSpec, gpd_sample


def two_point_sample(mean: float, var: float) -> np.ndarray:
    # two points have ddof=1 variance 2*d^2 and mean m
    d = math.sqrt(var / 2.0)
    return np.array([mean + d, mean - d])


class TestMme:
    def test_tie_branch(self):
        y = two_point_sample(0.7, math.pi**2 / 6.0)
        fit = mme_fit(y)
        assert fit.method is Method.MME
        assert fit.params.xi == 0.0
        assert fit.params.sigma == pytest.approx(math.exp(0.7 + specfun.EULER_GAMMA), rel=1e-12)

    def test_moment_matching_fixed_point(self):
        d = ExGPD.of(1.0, 0.5)
        y = two_point_sample(d.mean(), d.variance())
        fit = mme_fit(y)
        assert fit.params.sigma == pytest.approx(1.0, abs=1e-8)
        assert fit.params.xi == pytest.approx(0.5, abs=1e-8)

    @pytest.mark.parametrize("xi", [-0.9, -0.6, -0.3, 0.0, 0.3, 0.5, 1.0, 1.5, 2.0])
    def test_exact_moment_round_trip(self, xi):
        d = ExGPD.of(2.0, xi)
        y = two_point_sample(d.mean(), d.variance())
        fit = mme_fit(y)
        assert fit.params.sigma == pytest.approx(2.0, abs=1e-8)
        assert fit.params.xi == pytest.approx(xi, abs=1e-8)

    def test_monte_carlo_consistency(self):
        y = ExGPD.of(2.0, -0.3).sample(100_000, seed=202).values
        fit = mme_fit(y)
        assert fit.params.xi == pytest.approx(-0.3, abs=0.05)
        assert fit.params.sigma == pytest.approx(2.0, abs=0.1)

    def test_degenerate_sample(self):
        with pytest.raises(ValueError):
            mme_fit(np.array([1.0, 1.0, 1.0]))

    def test_variance_inversion_branches(self):
        assert xi_from_log_variance(math.pi**2 / 6.0) == 0.0
        assert xi_from_log_variance(math.pi**2 / 3.0) == pytest.approx(1.0, abs=1e-10)
        assert xi_from_log_variance(1.0) == pytest.approx(-1.0, abs=1e-10)


class TestMleScores:
    def test_scores_vanish_at_fit(self):
        y = ExGPD.of(1.0, 0.5).sample(2000, seed=5).values
        fit = mle_fit(y)
        score = _exgpd_score(fit.params.sigma, fit.params.xi, y)
        assert np.max(np.abs(score)) <= 1e-8

    def test_gpd_scores_vanish_at_fit(self):
        x = gpd_sample(SimSpec(Family.GPD, 0.0, Params(1.0, 0.3), 2000, seed=6)).values
        fit = gpd_mle_fit(x)
        score = _gpd_score(fit.params.sigma, fit.params.xi, x)
        assert np.max(np.abs(score)) <= 1e-8

    def test_constraint_holds_at_fit(self):
        y = ExGPD.of(1.0, -0.4).sample(500, seed=9).values
        fit = mle_fit(y)
        assert fit.params.sigma + fit.params.xi * math.exp(y.max()) > 0.0


class TestMleEquivalence:
    @pytest.mark.parametrize("xi", [-0.4, 0.0, 0.5, 1.0])
    def test_log_and_raw_routes_agree(self, xi):
        x = gpd_sample(SimSpec(Family.GPD, 0.0, Params(1.0, xi), 500, seed=hash(xi) % 1000)).values
        raw_fit = gpd_mle_fit(x)
        log_fit = mle_fit(np.log(x))
        assert log_fit.params.sigma == pytest.approx(raw_fit.params.sigma, abs=1e-6)
        assert log_fit.params.xi == pytest.approx(raw_fit.params.xi, abs=1e-6)
        # objectives differ by the data-only constant sum(log x)
        gap = exgpd_loglik(raw_fit.params, np.log(x)) - gpd_loglik(raw_fit.params, x)
        assert gap == pytest.approx(float(np.sum(np.log(x))), rel=1e-12)

    def test_consistency_large_sample(self):
        y = ExGPD.of(1.0, 0.5).sample(100_000, seed=77).values
        fit = mle_fit(y)
        assert fit.params.xi == pytest.approx(0.5, abs=0.02)
        assert fit.params.sigma == pytest.approx(1.0, abs=0.03)

    def test_gpd_consistency_large_sample(self):
        x = gpd_sample(SimSpec(Family.GPD, 0.0, Params(1.0, 0.5), 100_000, seed=78)).values
        fit = gpd_mle_fit(x)
        assert fit.params.sigma == pytest.approx(1.0, abs=0.03)


class TestCovariance:
    def test_closed_form_at_zero_shape(self):
        cov = asymptotic_cov(Params(1.0, 0.0), 1)
        np.testing.assert_allclose(cov, np.array([[2.0, -1.0], [-1.0, 1.0]]), atol=1e-15)

    def test_fit_populates_cov(self):
        y = ExGPD.of(1.0, 0.5).sample(5000, seed=12).values
        fit = mle_fit(y)
        np.testing.assert_allclose(fit.cov, asymptotic_cov(fit.params, fit.n))
        assert fit.cov[0, 1] == fit.cov[1, 0]
        assert fit.cov[0, 0] > 0.0 and fit.cov[1, 1] > 0.0

    def test_cov_absent_below_half(self):
        y = ExGPD.of(1.0, -0.7).sample(4000, seed=13).values
        fit = mle_fit(y)
        if fit.params.xi <= -0.5:
            assert fit.cov is None


class TestMleOptimality:
    def test_beats_moment_fit(self):
        y = ExGPD.of(1.0, 0.8).sample(3000, seed=21).values
        mme = mme_fit(y)
        mle = mle_fit(y)
        assert mle.loglik >= exgpd_loglik(mme.params, y) - 1e-9

    def test_loglik_stored_matches(self):
        y = ExGPD.of(2.0, 0.2).sample(1000, seed=22).values
        fit = mle_fit(y)
        assert fit.loglik == pytest.approx(exgpd_loglik(fit.params, y), rel=1e-12)


class TestBoundaryBehavior:
    def test_no_finite_mle_below_minus_one(self):
        # along log(-sigma/xi) -> max(y) from above with xi = -1.5 the
        # objective increases without bound
        y = ExGPD.of(1.0, -1.5).sample(20, seed=3).values
        y_max = float(y.max())
        values = []
        for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
            sigma = 1.5 * math.exp(y_max + eps)
            values.append(exgpd_loglik(Params(sigma, -1.5), y))
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] > values[0] + 10.0

    def test_boundary_warning(self):
        # short-tailed data (xi = -1.5) pushes the constrained fit onto the boundary
        x = gpd_sample(SimSpec(Family.GPD, 0.0, Params(1.0, -1.5), 200, seed=14)).values
        with pytest.warns(RuntimeWarning, match="boundary"):
            fit = gpd_mle_fit(x)
        assert fit.params.xi == pytest.approx(-1.0, abs=1e-3)

    def test_degenerate_raises(self):
        with pytest.raises(ValueError):
            gpd_mle_fit(np.full(10, 2.0))
        with pytest.raises(ValueError):
            mle_fit(np.zeros(10))

    def test_negative_raw_data_rejected(self):
        with pytest.raises(ValueError):
            gpd_mle_fit(np.array([1.0, -0.5, 2.0]))
