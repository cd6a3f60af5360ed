"""Log-scale generalized Pareto distribution toolkit.

Distribution functions, moment and likelihood estimators, tail risk measures,
and Hill / log-variance tail-index plots for heavy-tailed data.
"""

__version__ = "0.1.0"

from .distribution import ExGPD
from .estimate import (
    ConvergenceError,
    FitResult,
    Method,
    exgpd_loglik,
    gpd_loglik,
    gpd_mle_fit,
    mle_fit,
    mme_fit,
    xi_from_log_variance,
)
from .gpd import (
    Family,
    Params,
    SimSpec,
    XI_ZERO_TOL,
    gev_sample,
    gpd_cdf,
    gpd_pdf,
    gpd_quantile,
    gpd_sample,
)
from .ingest import Dataset, Tail, Transform, load_bmw, load_danish, load_numeric, prepare_tail_sample, with_transform
from .risk import RiskReport, cte, excess_cdf, mef, var_level
from .samples import SortedSample
from .tailindex import (
    EstimatePath,
    InsufficientExceedances,
    PathKind,
    hill_path,
    lv_path,
    lv_paths,
    lv_raw,
    read_region,
    window_values,
)

__all__ = [
    "ExGPD",
    "ConvergenceError",
    "FitResult",
    "Method",
    "exgpd_loglik",
    "gpd_loglik",
    "gpd_mle_fit",
    "mle_fit",
    "mme_fit",
    "xi_from_log_variance",
    "Family",
    "Params",
    "SimSpec",
    "XI_ZERO_TOL",
    "gev_sample",
    "gpd_cdf",
    "gpd_pdf",
    "gpd_quantile",
    "gpd_sample",
    "Dataset",
    "Tail",
    "Transform",
    "load_bmw",
    "load_danish",
    "load_numeric",
    "prepare_tail_sample",
    "with_transform",
    "RiskReport",
    "cte",
    "excess_cdf",
    "mef",
    "var_level",
    "SortedSample",
    "EstimatePath",
    "InsufficientExceedances",
    "PathKind",
    "hill_path",
    "lv_path",
    "lv_paths",
    "lv_raw",
    "read_region",
    "window_values",
]
