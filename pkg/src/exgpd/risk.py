"""Tail risk measures on the log scale: value at risk, mean excess, conditional tail expectation.

The mean excess function is evaluated through the closed-form tail integral
(incomplete beta / incomplete gamma); direct quadrature of the excess survival
function exists only in the test suite as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .distribution import ExGPD, _one_plus_xi_exp_neg
from .gpd import XI_ZERO_TOL


@dataclass(frozen=True)
class RiskReport:
    """VaR, mean excess at the VaR, and their sum (the conditional tail expectation)."""

    level: float
    var: float
    mef_at_var: float
    cte: float

    def to_dict(self) -> dict:
        return {"p": self.level, "var": self.var, "mef": self.mef_at_var, "cte": self.cte}


def var_level(d: ExGPD, p: float) -> float:
    """100p% quantile of the log-scale loss; equals the log of the raw-scale quantile."""
    return d.quantile(p)


def excess_cdf(d: ExGPD, u: float, y_prime: float) -> float:
    """Distribution function of the excess Y - u given Y > u, evaluated at y_prime >= 0.

    Computed as one minus the survival ratio in log space.  This is not itself
    a log-scale GPD law; the log transform destroys the threshold-stability of
    the raw-scale family.
    """
    if y_prime < 0.0:
        raise ValueError(f"y_prime must be >= 0, got {y_prime!r}")
    if u >= d.upper_support():
        raise ValueError(f"u={u!r} is at or above the upper support endpoint")
    if y_prime == 0.0:
        return 0.0
    return -math.expm1(d.log_sf(u + y_prime) - d.log_sf(u))


# exp(x) overflows above ~709.78; switch to cancellation-free series before that
_EXP_GUARD = 700.0


def _mef_series(log_x: float, a: float, extra_power: int) -> float:
    """sum_k x^(k + extra_power) / (a + k) from log x, safe for x underflowing to 0."""
    total = 0.0
    k = 0
    while True:
        lt = (k + extra_power) * log_x
        term = math.exp(lt) / (a + k) if lt > -745.0 else 0.0
        total += term
        if term < 1e-17 * max(total, 1e-300):
            return total
        k += 1


def mef(d: ExGPD, u: float) -> float:
    """Mean excess function E[Y - u | Y > u] via the closed-form tail integral."""
    if u >= d.upper_support():
        raise ValueError(f"u={u!r} is at or above the upper support endpoint")
    t = u - d.log_sigma
    xi = d.xi
    if d.params.is_xi_zero:
        if t > _EXP_GUARD:
            return math.exp(-t)  # leading term of the scaled incomplete gamma
        return specfun.expx_gamma_upper_0(math.exp(t))
    log_sf = d.log_sf(u)
    if xi > 0.0:
        a = 1.0 / xi
        log_x = xi * log_sf  # x = (1 + xi e^t / sigma)^(-1)
        if -log_sf > _EXP_GUARD:  # 1/sf overflows; the x^a factors cancel analytically
            return _mef_series(log_x, a, extra_power=0)
        return d.tail_integral(u) * math.exp(-log_sf)
    a = 1.0 - 1.0 / xi
    x = _one_plus_xi_exp_neg(t, xi)
    if -log_sf > _EXP_GUARD:
        return _mef_series(math.log(x), a, extra_power=1)
    return d.tail_integral(u) * math.exp(-log_sf)


def cte(d: ExGPD, p: float) -> RiskReport:
    """Conditional tail expectation E[Y | Y > y_p], reported as VaR plus mean excess."""
    v = var_level(d, p)
    m = mef(d, v)
    return RiskReport(level=p, var=v, mef_at_var=m, cte=v + m)
