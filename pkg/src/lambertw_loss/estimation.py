"""Sample statistics, moment-based starting values and maximum likelihood.

Every model is described by a :class:`ModelSpec` in :data:`MODELS`. Fits
run Nelder-Mead on an unconstrained parameter vector: positive
parameters are optimised on the log scale, locations and gamma as is.
Parameter sets that put an observation outside (or on the edge of) a
Lambert model's support are rejected before any density is evaluated.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special

from . import lambert_exponential as lexp
from . import lambert_normal as lnorm
from .distributions import (
    Cauchy,
    Exponential,
    Gamma,
    Logistic,
    LogNormal,
    Normal,
    ParamVector,
    Pareto,
    Weibull,
)
from .transform import LambertLocationScale, LambertScale

__all__ = [
    "SampleStats",
    "FitResult",
    "ModelSpec",
    "MODELS",
    "InsufficientDataError",
    "RootNotFoundError",
    "InfeasibleStartError",
    "sample_stats",
    "mom_start_wnormal",
    "mom_start_wexp",
    "build_distribution",
    "log_likelihood",
    "mle_fit",
]

log = logging.getLogger(__name__)

_GAMMA_SCAN_NORMAL = (-6.0, 6.0)
_GAMMA_SCAN_EXP = (-1.0 + 1e-6, 1.0 / 3.0 - 1e-6)
_SCAN_STEP = 0.01
_TOL = 1e-8
_MAX_ITER = 2000
_RESTARTS = 3
_SMALL_GAMMA = 0.05
_WALL = 1e-3  # edge chart stops once gap - floor < _WALL * floor
_EDGE_RESOLUTION = 1e-7


class InsufficientDataError(ValueError):
    pass


class RootNotFoundError(ArithmeticError):
    pass


class InfeasibleStartError(ValueError):
    pass


@dataclass(frozen=True)
class SampleStats:
    """Moment summary; ``variance`` is unbiased, skewness is m3 / m2^(3/2)."""

    n: int
    mean: float
    variance: float
    skewness_coeff: float
    min: float = math.nan
    max: float = math.nan


def sample_stats(data) -> SampleStats:
    y = np.asarray(data, dtype=float).ravel()
    if y.size < 3:
        raise InsufficientDataError(f"need at least 3 observations, got {y.size}")
    if not np.all(np.isfinite(y)):
        raise ValueError("data contain non-finite values")
    mean = float(y.mean())
    d = y - mean
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        raise InsufficientDataError("zero variance: skewness is undefined")
    m3 = float(np.mean(d * d * d))
    return SampleStats(
        n=int(y.size),
        mean=mean,
        variance=m2 * y.size / (y.size - 1),
        skewness_coeff=m3 / m2**1.5,
        min=float(y.min()),
        max=float(y.max()),
    )


def _solve_skewness(func, target, lo, hi):
    """Root of ``func(g) = target`` on [lo, hi], closest to 0 if several.

    Brackets come from a scan with step 0.01; each is refined by Brent.
    """
    grid = np.arange(lo, hi, _SCAN_STEP)
    grid = np.append(grid, hi)
    vals = np.array([func(g) - target for g in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
        elif np.sign(fa) * np.sign(fb) < 0:
            roots.append(optimize.brentq(lambda g: func(g) - target, a, b, xtol=1e-14, rtol=1e-15))
    if vals[-1] == 0.0:
        roots.append(grid[-1])
    if not roots:
        raise RootNotFoundError(f"skewness {target:.6g} is not attainable for gamma in [{lo:.6g}, {hi:.6g}]")
    return float(min(roots, key=abs))


def mom_start_wnormal(s: SampleStats) -> ParamVector:
    """Moment-matching (mu, sigma, gamma) for Lambert W x N."""
    g0 = 0.0 if s.skewness_coeff == 0 else _solve_skewness(lnorm.skewness, s.skewness_coeff, *_GAMMA_SCAN_NORMAL)
    e = math.exp(g0 * g0)
    sigma0 = math.sqrt(s.variance / (e * (e * (1.0 + 4.0 * g0 * g0) - g0 * g0)))
    mu0 = s.mean - sigma0 * g0 * math.exp(g0 * g0 / 2.0)
    return ParamVector.build([mu0, sigma0, g0], MODELS["wnormal"].names, ("sigma",))


def mom_start_wexp(s: SampleStats) -> ParamVector:
    """Moment-matching (lambda, gamma) for Lambert W x Exp, gamma in (-1, 1/3)."""
    if not s.mean > 0:
        raise ValueError("Lambert W x Exp needs a positive sample mean")
    g0 = 0.0 if s.skewness_coeff == 2.0 else _solve_skewness(lexp.skewness, s.skewness_coeff, *_GAMMA_SCAN_EXP)
    lam0 = 1.0 / (s.mean * (1.0 - g0) ** 2)
    return ParamVector.build([lam0, g0], MODELS["wexp"].names, ("lambda",))


# --- model registry -------------------------------------------------------


def _weibull_start(y, s):
    cv = math.sqrt(s.variance) / s.mean

    def cv_gap(k):
        g1 = special.gammaln(1.0 + 1.0 / k)
        g2 = special.gammaln(1.0 + 2.0 / k)
        return math.sqrt(math.expm1(g2 - 2.0 * g1)) - cv

    try:
        k = optimize.brentq(cv_gap, 0.05, 200.0)
    except ValueError:
        k = 1.0
    return [k, s.mean / math.gamma(1.0 + 1.0 / k)]


def _cauchy_start(y, s):
    # no moments exist; median and half the interquartile range instead
    q1, q2, q3 = np.percentile(y, [25, 50, 75])
    return [q2, max((q3 - q1) / 2.0, 1e-12 * max(1.0, abs(q2)))]


def _wnormal_start(y, s):
    try:
        mu, sigma, g = mom_start_wnormal(s).values
    except RootNotFoundError:
        mu, sigma, g = s.mean, math.sqrt(s.variance), 0.0
    # shrink gamma until every observation is strictly inside the support
    for _ in range(60):
        if _support_ok("wnormal", (mu, sigma, g), s.min, s.max):
            break
        g *= 0.5
    else:
        g = 0.0
    return [mu, sigma, g]


def _wexp_start(y, s):
    try:
        lam, g = mom_start_wexp(s).values
    except RootNotFoundError:
        lam, g = 1.0 / s.mean, 0.0
    for _ in range(60):
        if _support_ok("wexp", (lam, g), s.min, s.max):
            break
        g *= 0.5
    else:
        g = 0.0
    return [lam, g]


def _fit_exponential(y):
    return [1.0 / y.mean()]


def _fit_normal(y):
    return [y.mean(), y.std()]


def _require_positive(y, family):
    if y.min() <= 0:
        raise ValueError(f"{family} needs strictly positive data")


def _fit_lognormal(y):
    _require_positive(y, "log-normal")
    ly = np.log(y)
    return [ly.mean(), ly.std()]


def _fit_pareto(y):
    _require_positive(y, "Pareto")
    xm = y.min()
    return [y.size / np.sum(np.log(y / xm)), xm]


@dataclass(frozen=True)
class ModelSpec:
    model_id: str
    label: str
    names: tuple[str, ...]
    positive: tuple[str, ...]
    build: Callable[..., object]
    start: Callable[[np.ndarray, SampleStats], Sequence[float]] | None = None
    closed_form: Callable[[np.ndarray], Sequence[float]] | None = None
    lambert: bool = False

    @property
    def n_params(self) -> int:
        return len(self.names)

    def param_vector(self, values) -> ParamVector:
        return ParamVector.build(values, self.names, self.positive)


MODELS: dict[str, ModelSpec] = {
    m.model_id: m
    for m in [
        ModelSpec(
            "wnormal",
            "Lambert W normal",
            ("mu", "sigma", "gamma"),
            ("sigma",),
            lambda mu, sigma, g: LambertLocationScale(Normal(mu, sigma), g),
            start=_wnormal_start,
            lambert=True,
        ),
        ModelSpec(
            "wexp",
            "Lambert W exponential",
            ("lambda", "gamma"),
            ("lambda",),
            lambda lam, g: LambertScale(Exponential(lam), g),
            start=_wexp_start,
            lambert=True,
        ),
        ModelSpec("exponential", "exponential", ("rate",), ("rate",), Exponential, closed_form=_fit_exponential),
        ModelSpec(
            "gamma",
            "gamma",
            ("shape", "rate"),
            ("shape", "rate"),
            Gamma,
            start=lambda y, s: [s.mean**2 / s.variance, s.mean / s.variance],
        ),
        ModelSpec("lognormal", "log-normal", ("mu", "sigma"), ("sigma",), LogNormal, closed_form=_fit_lognormal),
        ModelSpec(
            "logistic",
            "logistic",
            ("loc", "scale"),
            ("scale",),
            Logistic,
            start=lambda y, s: [s.mean, math.sqrt(3.0 * s.variance) / math.pi],
        ),
        ModelSpec("normal", "normal", ("mu", "sigma"), ("sigma",), Normal, closed_form=_fit_normal),
        ModelSpec("weibull", "Weibull", ("shape", "scale"), ("shape", "scale"), Weibull, start=_weibull_start),
        ModelSpec("cauchy", "Cauchy", ("loc", "scale"), ("scale",), Cauchy, start=_cauchy_start),
        ModelSpec("pareto", "Pareto", ("shape", "scale"), ("shape", "scale"), Pareto, closed_form=_fit_pareto),
    ]
}


def _spec(model_id: str) -> ModelSpec:
    try:
        return MODELS[model_id]
    except KeyError:
        raise KeyError(f"unknown model {model_id!r}; choose from {', '.join(MODELS)}") from None


def _values(spec: ModelSpec, params) -> np.ndarray:
    if isinstance(params, ParamVector):
        return np.array([params[n] for n in spec.names])
    if isinstance(params, dict):
        return np.array([float(params[n]) for n in spec.names])
    return np.asarray(params, dtype=float)


def build_distribution(model_id: str, params):
    spec = _spec(model_id)
    return spec.build(*[float(v) for v in _values(spec, params)])


def _support_ok(model_id, values, ymin, ymax, margins=(0.0, 0.0)) -> bool:
    """Strict-interior check for the Lambert models, without density calls.

    ``margins`` are the minimum distances required between the support
    end and the smallest (first entry) or largest (second) observation.
    """
    lo_margin, hi_margin = margins
    if model_id == "wnormal":
        mu, sigma, g = values
        if not sigma > 0:
            return False
        if g == 0:
            return True
        bound = mu - sigma / (g * math.e)
        return ymin - bound > lo_margin if g > 0 else bound - ymax > hi_margin
    if model_id == "wexp":
        lam, g = values
        if not lam > 0 or ymin < 0:
            return False
        return g >= 0 or -1.0 / (math.e * g * lam) - ymax > hi_margin
    return True


def _edge_margins(y, ref) -> tuple[float, float]:
    # The likelihood grows without bound as the support end closes in on
    # the extreme observation, and the pole term is pure rounding noise once
    # that distance nears machine resolution. Fits keep at least this
    # distance, where the log-density is still resolved to about 1e-8.
    rel = _EDGE_RESOLUTION
    return rel * (abs(float(y.min())) + ref), rel * (abs(float(y.max())) + ref)


def log_likelihood(model_id: str, params, data) -> float:
    """Sum of log-densities.

    Returns ``-inf`` when any observation lies outside the support or on a
    boundary point where the density is not a finite positive number.
    """
    spec = _spec(model_id)
    y = np.asarray(data, dtype=float).ravel()
    values = _values(spec, params)
    if not _support_ok(model_id, values, y.min(), y.max()):
        return -math.inf
    try:
        dist = spec.build(*[float(v) for v in values])
    except (ValueError, TypeError):
        return -math.inf
    lp = np.asarray(dist.logpdf(y), dtype=float)
    if not np.all(np.isfinite(lp)):
        return -math.inf
    return float(lp.sum())


@dataclass(frozen=True)
class FitResult:
    model_id: str
    params: ParamVector
    loglik: float
    n_params: int
    n_obs: int
    converged: bool
    start_params: ParamVector
    iterations: int
    message: str = ""
    extra: dict = field(default_factory=dict, compare=False)


class _Chart:
    """Unconstrained coordinates for the optimizer.

    The natural chart logs the positive parameters. The edge chart, used by
    the Lambert models, replaces the location (or rate) with
    ``log((gap - floor) / sd)``, where ``gap`` is the distance from the
    support end to the nearest observation. The simplex can then approach
    the end smoothly instead of running into an infeasible wall.
    """

    def __init__(self, spec, y, sign=0):
        self.spec = spec
        self.sign = sign
        self.ymin = float(y.min())
        self.ymax = float(y.max())
        self.ref = float(np.std(y)) or 1.0
        lo, hi = _edge_margins(y, self.ref)
        self.floor = lo if sign > 0 else hi
        # below this the objective is flat in theta0 and the simplex never
        # meets xatol; a wall lets it collapse instead
        self.theta0_min = math.log(_WALL * self.floor / self.ref) if sign else -math.inf

    def feasible(self, theta) -> bool:
        return theta[0] >= self.theta0_min if self.sign else True

    def _edge_of(self, theta0):
        gap = self.floor + self.ref * math.exp(theta0)
        return self.ymin - gap if self.sign > 0 else self.ymax + gap

    def _theta0(self, gap):
        return max(math.log(max(gap - self.floor, 1e-300) / self.ref), self.theta0_min)

    def to_free(self, values):
        spec = self.spec
        if self.sign == 0:
            return np.array([math.log(v) if n in spec.positive else v for n, v in zip(spec.names, values)])
        if spec.model_id == "wnormal":
            mu, sigma, g = values
            bound = mu - sigma / (g * math.e)
            gap = self.ymin - bound if self.sign > 0 else bound - self.ymax
            return np.array([self._theta0(gap), math.log(sigma), math.log(abs(g))])
        lam, g = values
        gap = -1.0 / (math.e * g * lam) - self.ymax
        return np.array([self._theta0(gap), math.log(-g)])

    def from_free(self, theta):
        spec = self.spec
        if self.sign == 0:
            return np.array([math.exp(t) if n in spec.positive else t for n, t in zip(spec.names, theta)])
        edge = self._edge_of(theta[0])
        if spec.model_id == "wnormal":
            sigma = math.exp(theta[1])
            g = self.sign * math.exp(theta[2])
            return np.array([edge + sigma / (g * math.e), sigma, g])
        g = -math.exp(theta[1])
        return np.array([-1.0 / (math.e * g * edge), g])


def _edge_sign(model_id, values) -> int:
    if model_id == "wnormal" and values[2] != 0:
        return 1 if values[2] > 0 else -1
    if model_id == "wexp" and values[1] < 0:
        return -1
    return 0


def mle_fit(model_id: str, data, start=None, seed: int = 0) -> FitResult:
    """Maximum-likelihood fit of one model.

    Parameters
    ----------
    model_id
        Key of :data:`MODELS`.
    data
        Observations.
    start
        Optional starting values (ParamVector, dict or sequence). Defaults
        to moment matching for the Lambert models and a per-family moment
        start for the rest. Exponential, normal, log-normal and Pareto use
        their closed-form MLEs and ignore ``start``.
    seed
        Seeds the perturbations used for the simplex restarts.

    Non-convergence is reported in the result, not raised.
    """
    spec = _spec(model_id)
    y = np.asarray(data, dtype=float).ravel()
    if y.size < spec.n_params + 1:
        raise InsufficientDataError(f"{model_id} needs at least {spec.n_params + 1} observations")
    if not np.all(np.isfinite(y)):
        raise ValueError("data contain non-finite values")

    if spec.closed_form is not None and start is None:
        est = np.asarray(spec.closed_form(y), dtype=float)
        pv = spec.param_vector(est)
        ll = log_likelihood(model_id, est, y)
        return FitResult(
            model_id, pv, ll, spec.n_params, int(y.size), math.isfinite(ll), pv, 0, "closed form",
        )

    if start is None:
        start_values = np.asarray(spec.start(y, sample_stats(y)), dtype=float)
    else:
        start_values = _values(spec, start)
    start_pv = spec.param_vector(start_values)
    if not math.isfinite(log_likelihood(model_id, start_values, y)):
        raise InfeasibleStartError(f"log-likelihood is -inf at the start point {start_pv.as_dict()}")

    ymin, ymax = float(y.min()), float(y.max())
    margins = _edge_margins(y, float(np.std(y)) or 1.0)
    dist_build = spec.build

    def nll(values):
        if not np.all(np.isfinite(values)) or not _support_ok(model_id, values, ymin, ymax, margins):
            return math.inf
        try:
            dist = dist_build(*values)
        except (ValueError, TypeError):
            return math.inf
        lp = np.asarray(dist.logpdf(y), dtype=float)
        if not np.all(np.isfinite(lp)):
            return math.inf
        return -float(lp.sum())

    def run(chart, x0):
        def objective(theta):
            if not chart.feasible(theta):
                return math.inf
            try:
                return nll(chart.from_free(theta))
            except (OverflowError, ZeroDivisionError):
                return math.inf

        res = optimize.minimize(objective, x0, method="Nelder-Mead", options=opts)
        return res, objective

    opts = {"xatol": _TOL, "fatol": _TOL, "maxiter": _MAX_ITER, "maxfev": 4 * _MAX_ITER}
    # Lambert models with a one-sided support run in the edge chart; the
    # natural chart is kept for gamma near 0, where the edge chart degenerates
    sign = _edge_sign(model_id, start_values) if spec.lambert else 0
    chart = _Chart(spec, y, sign)
    best, objective = run(chart, chart.to_free(start_values))
    iterations = int(best.nit)
    fitted = chart.from_free(best.x)
    if sign == 0 and spec.lambert:
        alt_sign = _edge_sign(model_id, fitted)
        alt = _Chart(spec, y, alt_sign) if alt_sign else None
    elif sign and abs(fitted[-1]) < _SMALL_GAMMA:
        alt = _Chart(spec, y)
    else:
        alt = None
    if alt is not None:
        res, alt_objective = run(alt, alt.to_free(fitted))
        iterations += int(res.nit)
        if res.fun <= best.fun:
            best, objective, chart = res, alt_objective, alt

    rng = np.random.default_rng(seed)
    for _ in range(_RESTARTS):
        jitter = 0.1 * np.maximum(np.abs(best.x), 0.1) * rng.standard_normal(best.x.size)
        trial_start = best.x + jitter
        if not math.isfinite(objective(trial_start)):
            trial_start = best.x
        res = optimize.minimize(objective, trial_start, method="Nelder-Mead", options=opts)
        iterations += int(res.nit)
        if res.fun < best.fun - 1e-10 or (not best.success and res.success and res.fun <= best.fun):
            best = res
    est = chart.from_free(best.x)
    loglik = -float(best.fun)
    converged = bool(best.success) and math.isfinite(loglik)
    if not converged:
        log.warning("%s fit did not converge: %s", model_id, best.message)
    return FitResult(
        model_id, spec.param_vector(est), loglik, spec.n_params, int(y.size),
        converged, start_pv, iterations, str(best.message),
    )
