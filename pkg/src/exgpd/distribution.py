"""Log-scale generalized Pareto distribution.

If X follows the raw-scale distribution with parameters (sigma, xi), this module
models Y = log X.  On the log scale sigma acts purely as a location shift
(everything depends on y only through t = y - log sigma), the support becomes
the whole real line for xi >= 0 and (-inf, log(-sigma/xi)] for xi < 0, and all
moments are finite for every xi.

Numerical conventions: survival probabilities are carried in log space, and
(1 + xi*e^t) is never formed by naive arithmetic where it would overflow
(xi > 0, t large) or cancel (xi < 0, t near the endpoint).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .gpd import Params, XI_ZERO_TOL, _uniform_open
from .samples import SortedSample


def _log1p_xi_exp(t: float, xi: float) -> float:
    """log(1 + xi * exp(t)) for xi > 0, safe for any real t."""
    w = math.log(xi) + t
    if w > 36.7:  # log1p(e^-w) == e^-w below double precision
        return w + math.exp(-w)
    if t > 700.0:  # exp(t) alone would overflow even though xi*exp(t) is small
        return math.log1p(math.exp(w))
    return math.log1p(xi * math.exp(t))


def _one_plus_xi_exp_neg(t: float, xi: float) -> float:
    """1 + xi * exp(t) for xi < 0 without cancellation near the endpoint.

    Uses 1 + xi*e^t = -xi * e^t * expm1(t_up - t) with t_up = -log(-xi), which
    stays accurate as t approaches the support endpoint where the plain sum
    cancels to zero.
    """
    t_up = -math.log(-xi)
    gap = t_up - t
    if gap > 30.0:  # far from the endpoint; plain form is exact enough
        return 1.0 + xi * math.exp(t)
    return -xi * math.exp(t) * math.expm1(gap)


@dataclass(frozen=True)
class ExGPD:
    """Distribution of the log of a generalized Pareto variable."""

    params: Params

    @classmethod
    def of(cls, sigma: float, xi: float) -> "ExGPD":
        return cls(Params(sigma, xi))

    @property
    def sigma(self) -> float:
        return self.params.sigma

    @property
    def xi(self) -> float:
        return self.params.xi

    @property
    def log_sigma(self) -> float:
        return math.log(self.params.sigma)

    def upper_support(self) -> float:
        """log(-sigma/xi) for xi < 0, +inf otherwise."""
        if self.xi < -XI_ZERO_TOL:
            return self.log_sigma - math.log(-self.xi)
        return math.inf

    # -- distribution functions ------------------------------------------------

    def log_sf(self, y: float) -> float:
        """Log survival function, -inf at and above the upper endpoint."""
        t = y - self.log_sigma
        if self.params.is_xi_zero:
            if t > 709.0:
                return -math.inf
            return -math.exp(t)
        if self.xi > 0.0:
            return -_log1p_xi_exp(t, self.xi) / self.xi
        if y >= self.upper_support():
            return -math.inf
        w = _one_plus_xi_exp_neg(t, self.xi)
        if w <= 0.0:
            return -math.inf
        return -math.log(w) / self.xi

    def sf(self, y: float) -> float:
        return math.exp(self.log_sf(y))

    def cdf(self, y: float) -> float:
        """1 - (1 + xi*exp(y)/sigma)^(-1/xi); the double-exponential limit at xi = 0."""
        return -math.expm1(self.log_sf(y))

    def pdf(self, y: float) -> float:
        """Density (exp(y)/sigma) (1 + xi*exp(y)/sigma)^(-1/xi - 1); zero outside support."""
        t = y - self.log_sigma
        if self.params.is_xi_zero:
            if t > 700.0:
                return 0.0
            return math.exp(t - math.exp(t))
        if self.xi > 0.0:
            exponent = t - (1.0 / self.xi + 1.0) * _log1p_xi_exp(t, self.xi)
            return math.exp(exponent) if exponent < 709.0 else math.inf
        upper = self.upper_support()
        if y > upper:
            return 0.0
        w = _one_plus_xi_exp_neg(t, self.xi)
        if w <= 0.0:  # endpoint: limit depends on the sign of -1/xi - 1
            if self.xi > -1.0:
                return 0.0
            return math.exp(t) if self.xi == -1.0 else math.inf
        exponent = t - (1.0 / self.xi + 1.0) * math.log(w)
        return math.exp(exponent) if exponent < 709.0 else math.inf

    def mode(self) -> float:
        """Unique mode log(sigma); requires xi >= -1 for the density to be bounded."""
        if self.xi < -1.0:
            raise ValueError(f"density is unbounded for xi={self.xi} < -1; no mode exists")
        return self.log_sigma

    def hazard(self, y: float) -> float:
        """Failure rate 1/(sigma*exp(-y) + xi), strictly increasing in y."""
        if y >= self.upper_support():
            raise ValueError("hazard requires y strictly inside the support")
        t = y - self.log_sigma
        if t < -690.0:
            return math.exp(t)
        if t > 690.0:
            return 1.0 / self.xi if self.xi > XI_ZERO_TOL else math.inf
        return 1.0 / (math.exp(-t) + self.xi)

    def quantile(self, p: float) -> float:
        """Inverse cdf: log of the raw-scale quantile."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p!r}")
        return float(self._quantile_unchecked(p))

    def _quantile_unchecked(self, p):
        if self.params.is_xi_zero:
            q = -np.log1p(-p)
        else:
            q = np.expm1(-self.xi * np.log1p(-p)) / self.xi
        return self.log_sigma + np.log(q)

    def sample(self, n: int, seed: int) -> SortedSample:
        """n inverse-transform draws (log of raw-scale draws), sorted descending."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        rng = np.random.Generator(np.random.PCG64(seed))
        u = _uniform_open(rng, n)
        y = self._quantile_unchecked(u)
        return SortedSample.from_unsorted(y, source=f"exgpd sim seed={seed}")

    # -- moments ---------------------------------------------------------------

    def mgf(self, s: float) -> float:
        """Moment generating function E[exp(sY)] = E[X^s], evaluated in log space.

        Defined for s in (-1, 1/xi) when xi > 0 and s in (-1, inf) otherwise.
        """
        if s <= -1.0:
            raise ValueError(f"mgf requires s > -1, got {s!r}")
        if self.params.is_xi_zero:
            return math.exp(s * self.log_sigma + specfun.log_gamma(1.0 + s))
        xi = self.xi
        if xi > 0.0:
            if s >= 1.0 / xi:
                raise ValueError(f"mgf requires s < 1/xi = {1.0 / xi!r}, got {s!r}")
            log_m = (
                -math.log(xi)
                + s * (self.log_sigma - math.log(xi))
                + specfun.log_gamma(s + 1.0)
                + specfun.log_gamma(1.0 / xi - s)
                - specfun.log_gamma(1.0 / xi + 1.0)
            )
            return math.exp(log_m)
        log_m = (
            -math.log(-xi)
            + s * (self.log_sigma - math.log(-xi))
            + specfun.log_gamma(s + 1.0)
            + specfun.log_gamma(-1.0 / xi)
            - specfun.log_gamma(s + 1.0 - 1.0 / xi)
        )
        return math.exp(log_m)

    def mean(self) -> float:
        """log(sigma/|xi|) + psi(1) - psi(1/xi) with the matching branch for xi < 0."""
        psi1 = -specfun.EULER_GAMMA
        if self.params.is_xi_zero:
            return self.log_sigma + psi1
        if self.xi > 0.0:
            return self.log_sigma - math.log(self.xi) + psi1 - specfun.digamma(1.0 / self.xi)
        return self.log_sigma - math.log(-self.xi) + psi1 - specfun.digamma(1.0 - 1.0 / self.xi)

    def variance(self) -> float:
        """Depends on xi alone: trigamma(1) plus/minus a trigamma correction."""
        base = specfun.PI_SQ_OVER_6
        if self.params.is_xi_zero:
            return base
        if self.xi > 0.0:
            return base + specfun.trigamma(1.0 / self.xi)
        return base - specfun.trigamma(1.0 - 1.0 / self.xi)

    # -- closed-form identities (used as test oracles) ---------------------------

    def identity_a(self, r: float) -> float:
        """E[(1 + xi*exp(Y)/sigma)^(-r)] = 1/(1 + r*xi), valid for r*xi > -1."""
        if r * self.xi <= -1.0:
            raise ValueError(f"requires r*xi > -1, got r*xi = {r * self.xi!r}")
        return 1.0 / (1.0 + r * self.xi)

    def identity_b(self, k: int) -> float:
        """E[(log(1 + xi*exp(Y)/sigma))^k] = xi^k * k! for integer k >= 0."""
        if k < 0 or k != int(k):
            raise ValueError(f"k must be a nonnegative integer, got {k!r}")
        return self.xi**k * math.factorial(int(k))

    def identity_c(self, r: float) -> float:
        """E[exp(Y) * sf(Y)^r] = sigma / ((r+1-xi)(r+1)).

        The admissible r range depends on the sign of xi: 1 + r > xi when
        xi > 0, and r > -1 otherwise.
        """
        if self.xi > XI_ZERO_TOL:
            if 1.0 + r <= self.xi:
                raise ValueError(f"requires 1 + r > xi, got r={r!r}, xi={self.xi!r}")
        elif r <= -1.0:
            raise ValueError(f"requires r > -1, got {r!r}")
        return self.sigma / ((r + 1.0 - self.xi) * (r + 1.0))

    def poisson_max_cdf(self, lam: float, y: float) -> float:
        """P(max of a Poisson(lam) number of iid copies <= y) = exp(-lam * sf(y))."""
        if not lam > 0.0:
            raise ValueError(f"lam must be positive, got {lam!r}")
        return math.exp(-lam * self.sf(y))

    def tail_integral(self, c: float) -> float:
        """Integral of the survival function from c to the upper support end.

        Closed forms: an incomplete beta with vanishing second parameter for
        xi != 0, and the upper incomplete gamma at shape 0 for xi = 0.
        """
        t = c - self.log_sigma
        if self.params.is_xi_zero:
            if t > 700.0:
                return 0.0
            return specfun.gamma_upper_0(math.exp(t))
        if self.xi > 0.0:
            ell = _log1p_xi_exp(t, self.xi)
            x = math.exp(-ell)
            if x >= 1.0:
                raise ValueError(
                    f"c={c!r} is too far below the distribution body to resolve the integral"
                )
            return specfun.inc_beta_b0(x, 1.0 / self.xi)
        if c >= self.upper_support():
            raise ValueError(f"c={c!r} is at or above the upper support endpoint")
        x = _one_plus_xi_exp_neg(t, self.xi)
        if x >= 1.0:
            raise ValueError(
                f"c={c!r} is too far below the distribution body to resolve the integral"
            )
        return specfun.inc_beta_b0(x, 1.0 - 1.0 / self.xi)
