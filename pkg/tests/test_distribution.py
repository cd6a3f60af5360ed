import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats
from scipy.integrate import quad

from exgpd import specfun
from exgpd.distribution import ExGPD

XI_GRID = [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
SIGMA_GRID = [0.5, 1.0, 5.0]


def quantile_breaks(d: ExGPD, lo_p=1e-12, hi_p=1.0 - 1e-12, inner=(0.01, 0.5, 0.9, 0.99)):
    probs = [lo_p, *inner, hi_p]
    return [d.quantile(p) for p in probs]


def integrate_pdf(d: ExGPD, weight=lambda y: 1.0, **break_kwargs) -> float:
    breaks = quantile_breaks(d, **break_kwargs)
    total = 0.0
    for a, b in zip(breaks, breaks[1:]):
        piece, _ = quad(lambda y: weight(y) * d.pdf(y), a, b, limit=300)
        total += piece
    return total


def mgf_reference(sigma: float, xi: float, s) -> "mpmath.mpf":
    # same closed form evaluated in high precision; lets h = 1e-5 central
    # differences resolve the moments without float64 cancellation noise
    import mpmath as mp

    s = mp.mpf(s)
    sigma_m = mp.mpf(sigma)
    if xi == 0.0:
        return sigma_m**s * mp.gamma(1 + s)
    xi_m = mp.mpf(xi)
    if xi > 0.0:
        return (sigma_m / xi_m) ** s / xi_m * mp.beta(s + 1, 1 / xi_m - s)
    return -(1 / xi_m) * (-sigma_m / xi_m) ** s * mp.beta(s + 1, -1 / xi_m)


class TestCdf:
    def test_examples(self):
        assert ExGPD.of(1.0, 1.0).cdf(0.0) == pytest.approx(0.5, abs=1e-15)
        assert ExGPD.of(1.0, 0.0).cdf(0.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-14)
        assert ExGPD.of(1.0, -0.5).cdf(math.log(2.0)) == pytest.approx(1.0, abs=1e-12)

    def test_above_upper_endpoint(self):
        assert ExGPD.of(1.0, -0.5).cdf(10.0) == 1.0

    def test_location_property_exact(self):
        # sigma enters only as a log-location shift: bitwise identical values
        for sigma in (0.5, 3.0, 40.0):
            d = ExGPD.of(sigma, 0.7)
            base = ExGPD.of(1.0, 0.7)
            for y in (-2.0, 0.1, 5.0):
                assert d.cdf(y + d.log_sigma) == base.cdf(y + d.log_sigma - math.log(sigma))

    @given(st.floats(0.1, 10.0), st.floats(-2.0, 2.0), st.floats(-30.0, 30.0))
    def test_cdf_is_a_df(self, sigma, xi, y):
        d = ExGPD.of(sigma, xi)
        value = d.cdf(y)
        assert 0.0 <= value <= 1.0
        assert d.cdf(y + 0.5) >= value - 1e-12

    def test_far_tails(self):
        d = ExGPD.of(1.0, 0.5)
        assert d.cdf(-800.0) == pytest.approx(0.0, abs=1e-300)
        assert d.cdf(800.0) == 1.0


class TestPdf:
    def test_examples(self):
        assert ExGPD.of(1.0, 0.0).pdf(0.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert ExGPD.of(1.0, 1.0).pdf(0.0) == pytest.approx(0.25, rel=1e-14)
        # xi = -1: density climbs to exactly 1 at the endpoint log(sigma)
        assert ExGPD.of(1.0, -1.0).pdf(0.0) == pytest.approx(1.0, rel=1e-14)

    def test_outside_support_is_zero(self):
        assert ExGPD.of(1.0, -0.5).pdf(math.log(2.0) + 0.1) == 0.0

    @pytest.mark.parametrize("xi", XI_GRID)
    @pytest.mark.parametrize("sigma", SIGMA_GRID)
    def test_normalization(self, sigma, xi):
        assert integrate_pdf(ExGPD.of(sigma, xi)) == pytest.approx(1.0, abs=1e-8)

    def test_unbounded_below_minus_one(self):
        d = ExGPD.of(1.0, -2.0)
        near_end = d.upper_support() - 1e-9
        assert d.pdf(near_end) > 1e3


class TestModeAndHazard:
    def test_mode_examples(self):
        assert ExGPD.of(math.e, 0.5).mode() == pytest.approx(1.0, rel=1e-15)
        assert ExGPD.of(1.0, -1.0).mode() == 0.0
        with pytest.raises(ValueError):
            ExGPD.of(1.0, -2.0).mode()

    def test_hazard_examples(self):
        assert ExGPD.of(1.0, 1.0).hazard(0.0) == pytest.approx(0.5, rel=1e-14)
        # xi = 0 reduces to exp(y)/sigma
        assert ExGPD.of(2.0, 0.0).hazard(math.log(2.0)) == pytest.approx(1.0, rel=1e-14)
        assert ExGPD.of(2.0, 0.0).hazard(0.0) == pytest.approx(0.5, rel=1e-14)

    def test_hazard_limit_is_inverse_xi(self):
        d = ExGPD.of(1.0, 0.5)
        assert d.hazard(1000.0) == pytest.approx(2.0, rel=1e-9)

    @pytest.mark.parametrize("xi", XI_GRID)
    def test_hazard_increasing(self, xi):
        d = ExGPD.of(1.3, xi)
        hi = d.upper_support()
        grid = np.linspace(-8.0, min(hi - 1e-6, 8.0), 200)
        values = [d.hazard(float(y)) for y in grid]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_hazard_outside_support(self):
        with pytest.raises(ValueError):
            ExGPD.of(1.0, -0.5).hazard(math.log(2.0))


class TestQuantile:
    def test_examples(self):
        assert ExGPD.of(1.0, 1.0).quantile(0.5) == pytest.approx(0.0, abs=1e-15)
        assert ExGPD.of(1.0, 0.0).quantile(1.0 - math.exp(-1.0)) == pytest.approx(0.0, abs=1e-13)
        assert ExGPD.of(1.0, 0.5).quantile(0.75) == pytest.approx(math.log(2.0), rel=1e-13)

    def test_equals_log_of_raw_quantile(self):
        from exgpd.gpd import Params, gpd_quantile

        for xi in (-0.5, 0.3, 1.5):
            d = ExGPD.of(2.0, xi)
            for p in (0.1, 0.6, 0.99):
                assert d.quantile(p) == pytest.approx(
                    math.log(gpd_quantile(Params(2.0, xi), p)), rel=1e-13
                )

    @given(st.floats(0.1, 10.0), st.floats(-2.0, 2.0), st.floats(1e-6, 1.0 - 1e-6))
    def test_round_trip(self, sigma, xi, p):
        d = ExGPD.of(sigma, xi)
        assert d.cdf(d.quantile(p)) == pytest.approx(p, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            ExGPD.of(1.0, 0.5).quantile(1.0)


class TestSampling:
    def test_single_draws_are_quantiles(self):
        d = ExGPD.of(1.0, 0.5)
        sample = d.sample(25, seed=123)
        rng = np.random.Generator(np.random.PCG64(123))
        u = rng.random(25)
        expected = np.sort(d._quantile_unchecked(u))[::-1]
        np.testing.assert_array_equal(sample.values, expected)

    def test_monte_carlo_mean(self):
        d = ExGPD.of(1.0, 0.5)
        sample = d.sample(1_000_000, seed=17)
        assert float(np.mean(sample.values)) == pytest.approx(d.mean(), abs=0.01)

    def test_support_bound(self):
        d = ExGPD.of(1.0, -0.5)
        sample = d.sample(20_000, seed=4)
        assert sample.values.max() <= d.upper_support()

    def test_kolmogorov_smirnov(self):
        d = ExGPD.of(2.0, 0.3)
        sample = d.sample(20_000, seed=8)
        result = stats.kstest(sample.values, lambda arr: np.array([d.cdf(v) for v in arr]))
        assert result.pvalue > 0.01


class TestMgf:
    def test_at_zero(self):
        for xi in XI_GRID:
            assert ExGPD.of(2.0, xi).mgf(0.0) == pytest.approx(1.0, rel=1e-12)

    def test_xi_zero_gives_gamma(self):
        assert ExGPD.of(1.0, 0.0).mgf(1.0) == pytest.approx(1.0, rel=1e-13)

    def test_equals_raw_scale_mean(self):
        # E[X] = sigma/(1-xi) = 2 for sigma=1, xi=0.5
        assert ExGPD.of(1.0, 0.5).mgf(1.0) == pytest.approx(2.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            ExGPD.of(1.0, 0.5).mgf(2.0)  # s >= 1/xi
        with pytest.raises(ValueError):
            ExGPD.of(1.0, -0.5).mgf(-1.0)

    @pytest.mark.parametrize("xi", [-0.75, -0.2, 0.4, 1.5])
    def test_matches_quadrature(self, xi):
        # exp(s*y) weights need deep tails: the left tail contributes ~p^(1+s)
        d = ExGPD.of(1.5, xi)
        for s in (-0.5, 0.25):
            ref = integrate_pdf(
                d,
                weight=lambda y, s=s: math.exp(s * y),
                lo_p=1e-30,
                hi_p=1.0 - 1e-14,
                inner=(1e-6, 0.01, 0.5, 0.9, 0.99),
            )
            assert d.mgf(s) == pytest.approx(ref, rel=1e-7)


class TestMoments:
    def test_mean_examples(self):
        assert ExGPD.of(1.0, 0.0).mean() == pytest.approx(-specfun.EULER_GAMMA, abs=1e-14)
        assert ExGPD.of(1.0, 1.0).mean() == pytest.approx(0.0, abs=1e-13)
        assert ExGPD.of(math.e, 0.0).mean() == pytest.approx(1.0 - specfun.EULER_GAMMA, abs=1e-13)

    def test_variance_examples(self):
        assert ExGPD.of(1.0, 0.0).variance() == pytest.approx(math.pi**2 / 6.0, abs=1e-13)
        assert ExGPD.of(1.0, 1.0).variance() == pytest.approx(math.pi**2 / 3.0, abs=1e-12)
        assert ExGPD.of(1.0, -1.0).variance() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("xi", XI_GRID)
    def test_variance_ignores_sigma(self, xi):
        values = {ExGPD.of(sigma, xi).variance() for sigma in SIGMA_GRID}
        assert len(values) == 1

    @pytest.mark.parametrize("xi", [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0])
    @pytest.mark.parametrize("sigma", SIGMA_GRID)
    def test_against_mgf_differencing(self, sigma, xi):
        import mpmath as mp

        d = ExGPD.of(sigma, xi)
        with mp.workdps(40):
            h = mp.mpf("1e-5")
            m_plus = mgf_reference(sigma, xi, h)
            m_minus = mgf_reference(sigma, xi, -h)
            m_zero = mgf_reference(sigma, xi, 0)
            mean_fd = float((m_plus - m_minus) / (2 * h))
            second_fd = float((m_plus - 2 * m_zero + m_minus) / (h * h))
        assert d.mean() == pytest.approx(mean_fd, abs=1e-5)
        assert d.variance() == pytest.approx(second_fd - mean_fd**2, abs=1e-5)

    @pytest.mark.parametrize("xi", [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0])
    @pytest.mark.parametrize("sigma", SIGMA_GRID)
    def test_against_quadrature(self, sigma, xi):
        d = ExGPD.of(sigma, xi)
        m1 = integrate_pdf(d, weight=lambda y: y)
        m2 = integrate_pdf(d, weight=lambda y: y * y)
        assert d.mean() == pytest.approx(m1, abs=1e-5)
        assert d.variance() == pytest.approx(m2 - m1 * m1, abs=1e-5)

    @pytest.mark.parametrize("xi", [0.5, 1.0, 2.0])
    def test_all_moments_finite(self, xi):
        d = ExGPD.of(1.0, xi)
        for k in range(1, 7):
            value = integrate_pdf(d, weight=lambda y, k=k: abs(y) ** k)
            assert math.isfinite(value)
            assert value > 0.0


class TestIdentities:
    def test_identity_a_examples(self):
        assert ExGPD.of(1.0, 0.7).identity_a(0.0) == 1.0
        assert ExGPD.of(1.0, 0.5).identity_a(2.0) == pytest.approx(0.5, rel=1e-14)
        assert ExGPD.of(1.0, -0.5).identity_a(1.0) == pytest.approx(2.0, rel=1e-14)
        with pytest.raises(ValueError):
            ExGPD.of(1.0, -0.5).identity_a(2.0)

    def test_identity_b_examples(self):
        assert ExGPD.of(1.0, 0.5).identity_b(0) == 1.0
        assert ExGPD.of(1.0, 0.5).identity_b(2) == pytest.approx(0.5, rel=1e-14)
        assert ExGPD.of(1.0, -0.5).identity_b(3) == pytest.approx(-0.75, rel=1e-14)
        with pytest.raises(ValueError):
            ExGPD.of(1.0, 0.5).identity_b(-1)

    def test_identity_c_examples(self):
        assert ExGPD.of(1.0, 0.5).identity_c(0.0) == pytest.approx(2.0, rel=1e-14)
        assert ExGPD.of(2.0, -1.0).identity_c(0.0) == pytest.approx(1.0, rel=1e-14)
        assert ExGPD.of(1.0, 1.0).identity_c(1.0) == pytest.approx(0.5, rel=1e-14)

    def test_identity_c_branch_preconditions(self):
        with pytest.raises(ValueError):
            ExGPD.of(1.0, 1.5).identity_c(0.2)  # needs 1 + r > xi
        with pytest.raises(ValueError):
            ExGPD.of(1.0, -0.5).identity_c(-1.0)  # needs r > -1
        # 1 + r > xi is not required on the negative branch
        assert ExGPD.of(1.0, -0.5).identity_c(-0.9) > 0.0

    @pytest.mark.parametrize("xi", [-0.5, 0.3, 1.0])
    def test_monte_carlo_agreement(self, xi):
        d = ExGPD.of(1.2, xi)
        y = d.sample(1_000_000, seed=31).values
        w = 1.0 + xi * np.exp(y - d.log_sigma)

        r = 1.0
        values_a = w ** (-r)
        se = values_a.std(ddof=1) / math.sqrt(values_a.size)
        assert abs(values_a.mean() - d.identity_a(r)) < 3.0 * se

        k = 2
        values_b = np.log(w) ** k
        se = values_b.std(ddof=1) / math.sqrt(values_b.size)
        assert abs(values_b.mean() - d.identity_b(k)) < 3.0 * se

        values_c = np.exp(y) * np.exp(np.array([r * d.log_sf(v) for v in y]))
        se = values_c.std(ddof=1) / math.sqrt(values_c.size)
        assert abs(values_c.mean() - d.identity_c(r)) < 3.0 * se


class TestPoissonMax:
    def test_examples(self):
        d = ExGPD.of(1.0, 1.0)
        assert d.poisson_max_cdf(2.0, 0.0) == pytest.approx(math.exp(-1.0), rel=1e-13)
        assert d.poisson_max_cdf(5.0, 1e6) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            d.poisson_max_cdf(0.0, 1.0)

    def test_matches_simulated_maxima(self):
        d = ExGPD.of(1.0, 0.5)
        lam = 2.0
        reps = 100_000
        rng = np.random.Generator(np.random.PCG64(77))
        counts = rng.poisson(lam, reps)
        draws = d._quantile_unchecked(rng.random(int(counts.sum())))
        maxima = np.full(reps, -np.inf)
        idx = 0
        for i, c in enumerate(counts):
            if c:
                maxima[i] = draws[idx : idx + c].max()
                idx += c
        for y in (0.0, 1.0, 2.5):
            frac = float(np.mean(maxima <= y))
            se = math.sqrt(frac * (1.0 - frac) / reps)
            assert abs(frac - d.poisson_max_cdf(lam, y)) < 3.0 * max(se, 1e-4)


class TestTailIntegral:
    def test_xi_zero_example(self):
        assert ExGPD.of(1.0, 0.0).tail_integral(0.0) == pytest.approx(
            0.21938393439552027, rel=1e-11
        )

    def test_positive_xi_example(self):
        ref = specfun.inc_beta_b0(2.0 / 3.0, 2.0)
        assert ExGPD.of(1.0, 0.5).tail_integral(0.0) == pytest.approx(ref, rel=1e-13)

    def test_vanishes_at_endpoint(self):
        d = ExGPD.of(1.0, -0.5)
        assert d.tail_integral(d.upper_support() - 1e-9) == pytest.approx(0.0, abs=1e-8)
        with pytest.raises(ValueError):
            d.tail_integral(d.upper_support())

    @pytest.mark.parametrize("xi", [-0.9, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0])
    def test_matches_survival_quadrature(self, xi):
        d = ExGPD.of(1.3, xi)
        hi = min(d.upper_support(), d.quantile(1.0 - 1e-14))
        for p in (0.05, 0.4, 0.9):
            c = d.quantile(p)
            ref = 0.0
            breaks = np.linspace(c, hi, 8)
            for a, b in zip(breaks, breaks[1:]):
                piece, _ = quad(lambda y: d.sf(y), a, b, limit=300)
                ref += piece
            assert d.tail_integral(c) == pytest.approx(ref, abs=1e-7)


class TestParetoConstruction:
    def test_log_shifted_pareto_matches(self):
        # W Pareto with tail exponent alpha, conditioned on W > d_thr:
        # log(W - d_thr) follows the log-scale family with (d_thr/alpha, 1/alpha)
        alpha, d_thr = 2.5, 3.0
        rng = np.random.Generator(np.random.PCG64(55))
        u = rng.random(50_000)
        w = d_thr * u ** (-1.0 / alpha)
        y = np.log(w - d_thr)
        d = ExGPD.of(d_thr / alpha, 1.0 / alpha)
        result = stats.kstest(y, lambda arr: np.array([d.cdf(v) for v in arr]))
        assert result.pvalue > 0.01
