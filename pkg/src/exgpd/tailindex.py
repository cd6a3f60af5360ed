"""Tail-index estimate paths: the classical Hill plot and the log-variance plot.

Both estimators walk the descending order statistics X_1 >= X_2 >= ... and emit
one estimate of the shape parameter xi per threshold index k.  The Hill value
at k is the mean log spacing of the top k observations over log X_k.  The
log-variance value matches the sample variance of log exceedances over the
threshold X_i to the theoretical log-scale variance (a function of xi alone),
clips negative solutions to zero, and smooths by the running mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .estimate import xi_from_log_variance
from .samples import SortedSample


class PathKind(str, Enum):
    HILL_XI = "hill_xi"
    LV_XI_RAW = "lv_xi_raw"
    LV_XI_SMOOTHED = "lv_xi_smoothed"


class InsufficientExceedances(ValueError):
    """Fewer than two positive exceedances survive tie filtering."""


@dataclass(frozen=True)
class EstimatePath:
    """Sequence of (k, estimate) points; NaN marks an undefined point."""

    kind: PathKind
    ks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ks = np.asarray(self.ks, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if ks.ndim != 1 or ks.shape != values.shape or ks.size == 0:
            raise ValueError("ks and values must be matching nonempty 1-d arrays")
        if np.any(np.diff(ks) <= 0):
            raise ValueError("k values must be strictly increasing")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "values", values)

    @property
    def points(self) -> list[tuple[int, float]]:
        return list(zip(self.ks.tolist(), self.values.tolist()))

    def defined(self) -> tuple[np.ndarray, np.ndarray]:
        ok = np.isfinite(self.values)
        return self.ks[ok], self.values[ok]


def hill_path(s: SortedSample) -> EstimatePath:
    """Hill shape estimates xi_k = (1/k) sum_{j<=k} log X_j - log X_k for k = 2..n.

    Only the leading run of positive order statistics can enter (logs are
    taken), so the path stops at the last positive value; at least two are
    required.  A zero log spacing (top-k values all tied) yields an undefined
    point, marked NaN.
    """
    v = s.values
    if v.size < 2:
        raise ValueError("need at least 2 observations")
    m = int(np.searchsorted(-v, 0.0, side="left"))  # count of leading positives
    if m < 2:
        raise ValueError("Hill path needs at least two positive observations")
    logs = np.log(v[:m])
    ks = np.arange(2, m + 1)
    means = np.cumsum(logs)[1:] / ks
    xi = means - logs[1:]
    xi = np.where(xi == 0.0, np.nan, xi)
    return EstimatePath(PathKind.HILL_XI, ks, xi)


def lv_raw(s: SortedSample, i: int) -> float:
    """Variance-matching shape estimate at threshold index i (3 <= i <= n).

    The threshold is X_i; the estimate inverts the log-scale variance map on
    the sample variance of log(X_j - X_i) over the strictly greater X_j.
    Negative solutions are replaced by zero.
    """
    v = s.values
    if not 3 <= i <= v.size:
        raise ValueError(f"threshold index must lie in [3, {v.size}], got {i}")
    u = v[i - 1]
    exceedances = v[: i - 1] - u
    exceedances = exceedances[exceedances > 0.0]
    if exceedances.size < 2:
        raise InsufficientExceedances(
            f"only {exceedances.size} positive exceedances above threshold index {i}"
        )
    s2 = float(np.var(np.log(exceedances), ddof=1))
    if s2 == 0.0:
        return 0.0  # limit of the negative branch, clipped
    return max(xi_from_log_variance(s2), 0.0)


def lv_paths(s: SortedSample) -> tuple[EstimatePath, EstimatePath]:
    """Raw and running-mean log-variance paths over threshold indices 3..n.

    Indices without enough distinct exceedances are skipped; the running mean
    then divides by the number of available raw values up to k rather than by
    k - 2.
    """
    n = s.n
    if n < 3:
        raise ValueError("need at least 3 observations")
    v = s.values
    ks: list[int] = []
    raw: list[float] = []
    for i in range(3, n + 1):
        u = v[i - 1]
        exceedances = v[: i - 1] - u
        exceedances = exceedances[exceedances > 0.0]
        if exceedances.size < 2:
            continue
        s2 = float(np.var(np.log(exceedances), ddof=1))
        tilde = 0.0 if s2 == 0.0 else max(xi_from_log_variance(s2), 0.0)
        ks.append(i)
        raw.append(tilde)
    if not ks:
        raise InsufficientExceedances("no threshold index admits two positive exceedances")
    ks_arr = np.asarray(ks, dtype=int)
    raw_arr = np.asarray(raw, dtype=float)
    smoothed = np.cumsum(raw_arr) / np.arange(1, raw_arr.size + 1)
    return (
        EstimatePath(PathKind.LV_XI_RAW, ks_arr, raw_arr),
        EstimatePath(PathKind.LV_XI_SMOOTHED, ks_arr, smoothed),
    )


def lv_path(s: SortedSample) -> EstimatePath:
    """Running-mean log-variance path (the plotted estimate sequence)."""
    return lv_paths(s)[1]


def window_values(path: EstimatePath, n: int, lo_frac: float, hi_frac: float) -> np.ndarray:
    """Defined path values with k inside [ceil(lo_frac*n), floor(hi_frac*n)]."""
    k_lo = math.ceil(lo_frac * n)
    k_hi = math.floor(hi_frac * n)
    ks, values = path.defined()
    inside = values[(ks >= k_lo) & (ks <= k_hi)]
    if inside.size == 0:
        raise ValueError(f"no defined path points with k in [{k_lo}, {k_hi}]")
    return inside


def read_region(path: EstimatePath, n: int, lo_frac: float = 0.05, hi_frac: float = 0.20) -> tuple[float, float]:
    """Estimate interval: min and max of the path over the upper 5%-20% index window."""
    if n < 20:
        raise ValueError(f"reading window is empty for n={n} < 20")
    inside = window_values(path, n, lo_frac, hi_frac)
    return float(inside.min()), float(inside.max())
