"""Parameter estimation: moment matching via trigamma inversion and maximum likelihood.

The two likelihood fits (log scale and raw scale) are deliberately independent
code paths; their objectives differ by a data-only constant, so agreement of
the fitted parameters is a meaningful cross-check rather than a tautology.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from . import specfun
from .gpd import Params, XI_ZERO_TOL
from .samples import SortedSample

_PSI_1 = -specfun.EULER_GAMMA  # digamma(1)
_S2_TIE_TOL = 1e-10  # sample variance this close to pi^2/6 is treated as the xi = 0 case
_SCORE_TOL = 1e-8
_XI_FLOOR = -1.0 + 1e-9
_BOUNDARY_BAND = 1e-3


class Method(str, Enum):
    MME = "mme"
    MLE = "mle"


class ConvergenceError(RuntimeError):
    """Likelihood optimization failed to reach a stationary point."""


@dataclass
class FitResult:
    params: Params
    method: Method
    n: int
    loglik: float | None = None
    cov: np.ndarray | None = None  # asymptotic covariance of the estimates (already / n)

    def to_dict(self) -> dict:
        return {
            "sigma": self.params.sigma,
            "xi": self.params.xi,
            "method": self.method.value,
            "n": self.n,
            "loglik": self.loglik,
            "cov": None if self.cov is None else self.cov.tolist(),
        }


def _as_values(sample) -> np.ndarray:
    if isinstance(sample, SortedSample):
        return sample.values
    return np.asarray(sample, dtype=float)


# ---------------------------------------------------------------------------
# log-likelihoods (public: tests probe them directly)
# ---------------------------------------------------------------------------


def exgpd_loglik(params: Params, y) -> float:
    """Log-likelihood of log-scale data: sum(y) + n log(sigma)/xi - (1/xi+1) sum log(sigma + xi e^y).

    Returns -inf when sigma + xi*e^{y_i} <= 0 for some observation.  No xi > -1
    restriction is imposed here; the divergence of the objective for xi < -1 as
    the endpoint approaches the sample maximum is observable through this
    function.
    """
    y = _as_values(y)
    sigma, xi = params.sigma, params.xi
    r = np.exp(y - math.log(sigma))
    if abs(xi) < XI_ZERO_TOL:
        return float(np.sum(y) - y.size * math.log(sigma) - np.sum(r) - xi * np.sum(r - 0.5 * r * r))
    w = 1.0 + xi * r
    if np.any(w <= 0.0):
        return -math.inf
    return float(np.sum(y) - y.size * math.log(sigma) - (1.0 / xi + 1.0) * np.sum(np.log(w)))


def gpd_loglik(params: Params, x) -> float:
    """Log-likelihood of raw-scale data under the generalized Pareto density."""
    x = _as_values(x)
    sigma, xi = params.sigma, params.xi
    t = x / sigma
    if np.any(t < 0.0):
        return -math.inf
    if abs(xi) < XI_ZERO_TOL:
        return float(-x.size * math.log(sigma) - np.sum(t) - xi * np.sum(t - 0.5 * t * t))
    w = 1.0 + xi * t
    if np.any(w <= 0.0):
        return -math.inf
    return float(-x.size * math.log(sigma) - (1.0 / xi + 1.0) * np.sum(np.log(w)))


# ---------------------------------------------------------------------------
# method of moments
# ---------------------------------------------------------------------------


def xi_from_log_variance(s2: float) -> float:
    """Shape estimate from a sample variance of log-scale data.

    Inverts the variance map branch by branch: s2 above pi^2/6 lands in the
    xi > 0 branch, below it in the xi < 0 branch, and within _S2_TIE_TOL of
    pi^2/6 returns exactly 0.
    """
    if not s2 > 0.0:
        raise ValueError(f"sample variance must be positive, got {s2!r}")
    gap = s2 - specfun.PI_SQ_OVER_6
    if abs(gap) <= _S2_TIE_TOL:
        return 0.0
    if gap > 0.0:
        return 1.0 / specfun.inv_trigamma(gap)
    return 1.0 / (1.0 - specfun.inv_trigamma(-gap))


def mme_fit(sample) -> FitResult:
    """Method-of-moments fit of (sigma, xi) from log-scale observations."""
    y = _as_values(sample)
    if y.size < 2:
        raise ValueError("need at least 2 observations")
    ybar = float(np.mean(y))
    s2 = float(np.var(y, ddof=1))
    if s2 == 0.0:
        raise ValueError("degenerate sample: zero variance")
    xi = xi_from_log_variance(s2)
    if xi == 0.0:
        sigma = math.exp(ybar - _PSI_1)
    elif xi > 0.0:
        sigma = xi * math.exp(ybar - _PSI_1 + specfun.digamma(1.0 / xi))
    else:
        sigma = -xi * math.exp(ybar - _PSI_1 + specfun.digamma(1.0 - 1.0 / xi))
    return FitResult(params=Params(sigma, xi), method=Method.MME, n=int(y.size))


# ---------------------------------------------------------------------------
# maximum likelihood
# ---------------------------------------------------------------------------


def asymptotic_cov(params: Params, n: int) -> np.ndarray:
    """Large-sample covariance of the ML estimates of (sigma, xi), valid for xi > -0.5."""
    s, xi = params.sigma, params.xi
    one = 1.0 + xi
    return np.array([[2.0 * s * s * one, -s * one], [-s * one, one * one]]) / n


def _gpd_negll_grad(p: np.ndarray, x: np.ndarray):
    # coordinates (log sigma, xi); returns penalty with zero slope when infeasible
    a, xi = p
    if not (-700.0 < a < 700.0) or xi <= _XI_FLOOR:
        return 1e12, np.zeros(2)
    sigma = math.exp(a)
    t = x / sigma
    w = 1.0 + xi * t
    if np.any(w <= 0.0):
        return 1e12, np.zeros(2)
    n = x.size
    if abs(xi) < XI_ZERO_TOL:
        ll = -n * a - t.sum() - xi * np.sum(t - 0.5 * t * t)
        dl_da = -n + t.sum() + xi * np.sum(t * t - t)
        dl_dxi = -np.sum(t - 0.5 * t * t)
    else:
        lw = np.log(w)
        tw = t / w
        ll = -n * a - (1.0 + 1.0 / xi) * lw.sum()
        dl_da = -n + (1.0 + 1.0 / xi) * xi * tw.sum()
        dl_dxi = lw.sum() / xi**2 - (1.0 + 1.0 / xi) * tw.sum()
    return -ll, -np.array([dl_da, dl_dxi])


def _gpd_score(sigma: float, xi: float, x: np.ndarray) -> np.ndarray:
    t = x / sigma
    n = x.size
    if abs(xi) < XI_ZERO_TOL:
        ds = (-n + t.sum() + xi * np.sum(t * t - t)) / sigma
        dxi = -np.sum(t - 0.5 * t * t) - 2.0 * xi * np.sum(t**3 / 3.0 - 0.5 * t * t)
        return np.array([ds, dxi])
    w = 1.0 + xi * t
    lw = np.log(w)
    tw = t / w
    ds = -n / sigma + (1.0 + 1.0 / xi) * (xi / sigma) * tw.sum()
    dxi = lw.sum() / xi**2 - (1.0 + 1.0 / xi) * tw.sum()
    return np.array([ds, dxi])


def _exgpd_negll_grad(p: np.ndarray, y: np.ndarray):
    a, xi = p
    if not (-700.0 < a < 700.0) or xi <= _XI_FLOOR:
        return 1e12, np.zeros(2)
    e = np.exp(y)
    sigma = math.exp(a)
    g = sigma + xi * e
    if np.any(g <= 0.0):
        return 1e12, np.zeros(2)
    n = y.size
    if abs(xi) < XI_ZERO_TOL:
        r = e / sigma
        ll = y.sum() - n * a - r.sum() - xi * np.sum(r - 0.5 * r * r)
        dl_da = -n + r.sum() + xi * np.sum(r * r - r)
        dl_dxi = -np.sum(r - 0.5 * r * r)
    else:
        lg = np.log(g)
        ll = y.sum() + n * a / xi - (1.0 / xi + 1.0) * lg.sum()
        dl_da = sigma * (n / (sigma * xi) - (1.0 / xi + 1.0) * np.sum(1.0 / g))
        dl_dxi = -n * a / xi**2 - (1.0 / xi + 1.0) * np.sum(e / g) + lg.sum() / xi**2
    return -ll, -np.array([dl_da, dl_dxi])


def _exgpd_score(sigma: float, xi: float, y: np.ndarray) -> np.ndarray:
    e = np.exp(y)
    n = y.size
    if abs(xi) < XI_ZERO_TOL:
        r = e / sigma
        ds = (-n + r.sum() + xi * np.sum(r * r - r)) / sigma
        dxi = -np.sum(r - 0.5 * r * r) - 2.0 * xi * np.sum(r**3 / 3.0 - 0.5 * r * r)
        return np.array([ds, dxi])
    g = sigma + xi * e
    lg = np.log(g)
    ds = n / (sigma * xi) - (1.0 / xi + 1.0) * np.sum(1.0 / g)
    dxi = -n * math.log(sigma) / xi**2 - (1.0 / xi + 1.0) * np.sum(e / g) + lg.sum() / xi**2
    return np.array([ds, dxi])


def _feasible(sigma: float, xi: float, xmax: float) -> bool:
    return sigma > 0.0 and xi > _XI_FLOOR and sigma + xi * xmax > 0.0


def _maximize(negll_grad, score, data: np.ndarray, xmax: float, init: Params) -> tuple[float, float]:
    x0 = np.array([math.log(init.sigma), init.xi])
    res = minimize(
        negll_grad,
        x0,
        args=(data,),
        jac=True,
        method="L-BFGS-B",
        bounds=[(-600.0, 600.0), (_XI_FLOOR + 1e-12, 1e3)],
        options={"maxiter": 500, "ftol": 1e-14, "gtol": 1e-12},
    )
    sigma, xi = math.exp(res.x[0]), float(res.x[1])
    if not _feasible(sigma, xi, xmax):
        raise ConvergenceError("optimizer left the feasible region")

    # Newton polish on the score equations until both components are below
    # _SCORE_TOL; the Jacobian is a central finite difference of the analytic score.
    for _ in range(40):
        sc = score(sigma, xi, data)
        if np.max(np.abs(sc)) <= 1e-9:
            break
        hs = 1e-7 * sigma
        hx = 1e-7
        jac = np.empty((2, 2))
        jac[:, 0] = (score(sigma + hs, xi, data) - score(sigma - hs, xi, data)) / (2.0 * hs)
        jac[:, 1] = (score(sigma, xi + hx, data) - score(sigma, xi - hx, data)) / (2.0 * hx)
        try:
            step = np.linalg.solve(jac, -sc)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        while lam > 1e-12 and not _feasible(sigma + lam * step[0], xi + lam * step[1], xmax):
            lam *= 0.5
        if lam <= 1e-12:
            break
        sigma += lam * step[0]
        xi += lam * step[1]
    return sigma, xi


def _finish(sigma: float, xi: float, data: np.ndarray, score, loglik_value: float, n: int) -> FitResult:
    sc = np.max(np.abs(score(sigma, xi, data)))
    near_boundary = xi <= -1.0 + _BOUNDARY_BAND
    if near_boundary:
        warnings.warn(
            f"shape estimate xi={xi:.6f} sits at the xi = -1 boundary; "
            "the likelihood has no interior maximum there",
            RuntimeWarning,
            stacklevel=3,
        )
    elif sc > _SCORE_TOL:
        raise ConvergenceError(f"score norm {sc:.3e} above tolerance {_SCORE_TOL:.0e}")
    params = Params(sigma, xi)
    cov = asymptotic_cov(params, n) if xi > -0.5 else None
    return FitResult(params=params, method=Method.MLE, n=n, loglik=loglik_value, cov=cov)


def _default_init(y_like: np.ndarray, xmax: float) -> Params:
    # moment fit, clipped into the feasible region
    try:
        mme = mme_fit(y_like)
        xi0 = min(max(mme.params.xi, -0.9), 10.0)
        sigma0 = mme.params.sigma
    except ValueError:
        xi0, sigma0 = 0.1, 1.0
    if xi0 < 0.0:
        sigma0 = max(sigma0, (1.0 + 1e-3) * (-xi0) * xmax)
    return Params(max(sigma0, 1e-300), xi0)


def mle_fit(sample, init: Params | None = None) -> FitResult:
    """Maximum likelihood fit of (sigma, xi) from log-scale observations."""
    y = _as_values(sample)
    if y.size < 2:
        raise ValueError("need at least 2 observations")
    if float(np.var(y)) == 0.0:
        raise ValueError("degenerate sample: all observations equal")
    emax = float(np.exp(np.max(y)))
    if init is None:
        init = _default_init(y, emax)
    sigma, xi = _maximize(_exgpd_negll_grad, _exgpd_score, y, emax, init)
    ll = exgpd_loglik(Params(sigma, xi), y)
    return _finish(sigma, xi, y, _exgpd_score, ll, int(y.size))


def gpd_mle_fit(sample, init: Params | None = None) -> FitResult:
    """Maximum likelihood fit of (sigma, xi) from raw-scale exceedances."""
    x = _as_values(sample)
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    if np.any(x < 0.0):
        raise ValueError("raw-scale observations must be nonnegative")
    if float(np.var(x)) == 0.0:
        raise ValueError("degenerate sample: all observations equal")
    xmax = float(np.max(x))
    if init is None:
        if np.all(x > 0.0):
            init = _default_init(np.log(x), xmax)
        else:
            init = Params(float(np.mean(x)), 0.1)
    sigma, xi = _maximize(_gpd_negll_grad, _gpd_score, x, xmax, init)
    ll = gpd_loglik(Params(sigma, xi), x)
    return _finish(sigma, xi, x, _gpd_score, ll, int(x.size))
