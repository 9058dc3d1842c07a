"""Lambert W transformed distributions and loss-model fitting."""

from .distributions import (
    Cauchy,
    Exponential,
    Gamma,
    Interval,
    InvalidParameterError,
    Logistic,
    LogNormal,
    Normal,
    ParamVector,
    Pareto,
    Weibull,
)
from .estimation import MODELS, FitResult, build_distribution, log_likelihood, mle_fit, sample_stats
from .lambert_exponential import WExpParams
from .lambert_normal import WNormalParams
from .model_selection import ComparisonTable, aic, bic, compare, log_shift
from .transform import LambertLocationScale, LambertScale
from .wfun import lambert_w0, lambert_wm1, w0, wm1

__version__ = "0.1.0"

__all__ = [
    "Cauchy",
    "Exponential",
    "Gamma",
    "Interval",
    "InvalidParameterError",
    "Logistic",
    "LogNormal",
    "Normal",
    "ParamVector",
    "Pareto",
    "Weibull",
    "MODELS",
    "FitResult",
    "build_distribution",
    "log_likelihood",
    "mle_fit",
    "sample_stats",
    "WExpParams",
    "WNormalParams",
    "ComparisonTable",
    "aic",
    "bic",
    "compare",
    "log_shift",
    "LambertLocationScale",
    "LambertScale",
    "lambert_w0",
    "lambert_wm1",
    "w0",
    "wm1",
]
