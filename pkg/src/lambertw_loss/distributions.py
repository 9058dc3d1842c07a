"""Classical continuous families used as transform inputs and as baselines.

Each family is a frozen dataclass deriving from :class:`BaseDistribution`.
Evaluation methods accept scalars or arrays and return the same kind.
Log-densities are computed in closed form rather than as ``log(pdf)`` so
that likelihoods do not underflow in the tails.

Parameterisations
-----------------
Normal(mu, sigma), Exponential(rate), Gamma(shape, rate),
LogNormal(mu, sigma) on the log scale, Logistic(loc, scale),
Weibull(shape, scale), Cauchy(loc, scale) and Pareto(shape, scale), the
last being Pareto type I with support ``x >= scale``.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np
from scipy import special

__all__ = [
    "Family",
    "Constraint",
    "Param",
    "ParamVector",
    "InvalidParameterError",
    "Interval",
    "BaseDistribution",
    "LocationScaleFamily",
    "ScaleFamily",
    "Normal",
    "Exponential",
    "Gamma",
    "LogNormal",
    "Logistic",
    "Weibull",
    "Cauchy",
    "Pareto",
    "make_distribution",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class InvalidParameterError(ValueError):
    pass


class Family(enum.Enum):
    NORMAL = "normal"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    LOGNORMAL = "lognormal"
    LOGISTIC = "logistic"
    WEIBULL = "weibull"
    CAUCHY = "cauchy"
    PARETO = "pareto"


class Constraint(enum.Enum):
    FREE = "free"
    POSITIVE = "positive"


@dataclass(frozen=True)
class Param:
    name: str
    value: float
    constraint: Constraint = Constraint.FREE


@dataclass(frozen=True)
class ParamVector:
    """Ordered, named parameter values with positivity constraints."""

    entries: tuple[Param, ...]

    def __post_init__(self):
        for p in self.entries:
            if not math.isfinite(p.value):
                raise InvalidParameterError(f"{p.name}={p.value!r} is not finite")
            if p.constraint is Constraint.POSITIVE and not p.value > 0:
                raise InvalidParameterError(f"{p.name} must be > 0, got {p.value!r}")

    @classmethod
    def build(cls, values, names, positive=()) -> "ParamVector":
        return cls(
            tuple(
                Param(n, float(v), Constraint.POSITIVE if n in positive else Constraint.FREE)
                for n, v in zip(names, values)
            )
        )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.entries)

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.entries])

    def as_dict(self) -> dict[str, float]:
        return {p.name: p.value for p in self.entries}

    def __getitem__(self, name: str) -> float:
        for p in self.entries:
            if p.name == name:
                return p.value
        raise KeyError(name)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class Interval(NamedTuple):
    lower: float
    upper: float

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x >= self.lower) & (x <= self.upper)


def _wrap(x, out):
    """Return a Python float for scalar input, the array otherwise."""
    if np.ndim(x) == 0:
        return float(out)
    return out


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")


def _finite(name, value):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


def _check_prob(p):
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise ValueError("probabilities must lie strictly inside (0, 1)")
    return p


class BaseDistribution(ABC):
    """Common contract: density, log-density, cdf, survival, quantile, sampler."""

    family: Family
    _positive_params: tuple[str, ...] = ()

    @property
    def params(self) -> ParamVector:
        names = [f.name for f in fields(self)]
        return ParamVector.build([getattr(self, n) for n in names], names, self._positive_params)

    @abstractmethod
    def support(self) -> Interval: ...

    @abstractmethod
    def _logpdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _ppf(self, p: np.ndarray) -> np.ndarray: ...

    def _sf(self, x):
        return 1.0 - self._cdf(x)

    def _draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self._ppf(rng.random(n))

    def logpdf(self, x):
        xa = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self._logpdf(xa)
        return _wrap(x, out)

    def pdf(self, x):
        return _wrap(x, np.exp(np.asarray(self.logpdf(x))))

    def cdf(self, x):
        xa = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self._cdf(xa)
        return _wrap(x, out)

    def sf(self, x):
        xa = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self._sf(xa)
        return _wrap(x, out)

    def quantile(self, p):
        pa = _check_prob(p)
        return _wrap(p, self._ppf(pa))

    def sample(self, n: int, seed=None) -> np.ndarray:
        """Draw ``n`` values; ``seed`` is an int or a numpy Generator."""
        if n < 1:
            raise ValueError("n must be >= 1")
        return self._draw(np.random.default_rng(seed), int(n))


class LocationScaleFamily(BaseDistribution):
    """Families closed under affine maps; expose ``loc`` and ``scale``."""

    @property
    @abstractmethod
    def loc(self) -> float: ...

    @property
    @abstractmethod
    def scale(self) -> float: ...


class ScaleFamily(BaseDistribution):
    """Non-negative families closed under positive scaling; expose ``scale``."""

    @property
    @abstractmethod
    def scale(self) -> float: ...


@dataclass(frozen=True)
class Normal(LocationScaleFamily):
    mu: float = 0.0
    sigma: float = 1.0
    family = Family.NORMAL
    _positive_params = ("sigma",)

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)

    loc = property(lambda self: self.mu)
    scale = property(lambda self: self.sigma)

    def support(self):
        return Interval(-math.inf, math.inf)

    def _logpdf(self, x):
        z = (x - self.mu) / self.sigma
        return -0.5 * z * z - math.log(self.sigma) - _LOG_SQRT_2PI

    def _cdf(self, x):
        return special.ndtr((x - self.mu) / self.sigma)

    def _sf(self, x):
        return special.ndtr((self.mu - x) / self.sigma)

    def _ppf(self, p):
        return self.mu + self.sigma * special.ndtri(p)

    def _draw(self, rng, n):
        return rng.normal(self.mu, self.sigma, n)

    def mean(self):
        return self.mu

    def variance(self):
        return self.sigma**2


@dataclass(frozen=True)
class Exponential(ScaleFamily):
    rate: float = 1.0
    family = Family.EXPONENTIAL
    _positive_params = ("rate",)

    def __post_init__(self):
        _positive("rate", self.rate)

    scale = property(lambda self: 1.0 / self.rate)

    def support(self):
        return Interval(0.0, math.inf)

    def _logpdf(self, x):
        return np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf)

    def _cdf(self, x):
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)

    def _sf(self, x):
        return np.where(x > 0, np.exp(-self.rate * np.maximum(x, 0.0)), 1.0)

    def _ppf(self, p):
        return -np.log1p(-p) / self.rate

    def mean(self):
        return 1.0 / self.rate

    def variance(self):
        return 1.0 / self.rate**2


@dataclass(frozen=True)
class Gamma(ScaleFamily):
    shape: float = 1.0
    rate: float = 1.0
    family = Family.GAMMA
    _positive_params = ("shape", "rate")

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("rate", self.rate)

    scale = property(lambda self: 1.0 / self.rate)

    def support(self):
        return Interval(0.0, math.inf)

    def _logpdf(self, x):
        k, r = self.shape, self.rate
        xp = np.where(x > 0, x, 1.0)
        val = (k - 1.0) * np.log(xp) + k * math.log(r) - r * xp - special.gammaln(k)
        at_zero = math.log(r) if k == 1.0 else (np.inf if k < 1.0 else -np.inf)
        return np.where(x > 0, val, np.where(x == 0, at_zero, -np.inf))

    def _cdf(self, x):
        return special.gammainc(self.shape, self.rate * np.maximum(x, 0.0))

    def _sf(self, x):
        return special.gammaincc(self.shape, self.rate * np.maximum(x, 0.0))

    def _ppf(self, p):
        return special.gammaincinv(self.shape, p) / self.rate

    def _draw(self, rng, n):
        return rng.gamma(self.shape, 1.0 / self.rate, n)

    def mean(self):
        return self.shape / self.rate

    def variance(self):
        return self.shape / self.rate**2


@dataclass(frozen=True)
class LogNormal(ScaleFamily):
    mu: float = 0.0
    sigma: float = 1.0
    family = Family.LOGNORMAL
    _positive_params = ("sigma",)

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)

    scale = property(lambda self: math.exp(self.mu))

    def support(self):
        return Interval(0.0, math.inf)

    def _logpdf(self, x):
        xp = np.where(x > 0, x, 1.0)
        lx = np.log(xp)
        z = (lx - self.mu) / self.sigma
        val = -0.5 * z * z - lx - math.log(self.sigma) - _LOG_SQRT_2PI
        return np.where(x > 0, val, -np.inf)

    def _cdf(self, x):
        xp = np.where(x > 0, x, 1.0)
        return np.where(x > 0, special.ndtr((np.log(xp) - self.mu) / self.sigma), 0.0)

    def _sf(self, x):
        xp = np.where(x > 0, x, 1.0)
        return np.where(x > 0, special.ndtr((self.mu - np.log(xp)) / self.sigma), 1.0)

    def _ppf(self, p):
        return np.exp(self.mu + self.sigma * special.ndtri(p))

    def _draw(self, rng, n):
        return np.exp(rng.normal(self.mu, self.sigma, n))

    def mean(self):
        return math.exp(self.mu + 0.5 * self.sigma**2)

    def variance(self):
        s2 = self.sigma**2
        return math.expm1(s2) * math.exp(2 * self.mu + s2)


@dataclass(frozen=True)
class Logistic(LocationScaleFamily):
    loc: float = 0.0
    scale: float = 1.0
    family = Family.LOGISTIC
    _positive_params = ("scale",)

    def __post_init__(self):
        _finite("loc", self.loc)
        _positive("scale", self.scale)

    def support(self):
        return Interval(-math.inf, math.inf)

    def _logpdf(self, x):
        a = np.abs((x - self.loc) / self.scale)
        return -a - 2.0 * np.log1p(np.exp(-a)) - math.log(self.scale)

    def _cdf(self, x):
        return special.expit((x - self.loc) / self.scale)

    def _sf(self, x):
        return special.expit((self.loc - x) / self.scale)

    def _ppf(self, p):
        return self.loc + self.scale * special.logit(p)

    def mean(self):
        return self.loc

    def variance(self):
        return (math.pi * self.scale) ** 2 / 3.0


@dataclass(frozen=True)
class Weibull(ScaleFamily):
    shape: float = 1.0
    scale: float = 1.0
    family = Family.WEIBULL
    _positive_params = ("shape", "scale")

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("scale", self.scale)

    def support(self):
        return Interval(0.0, math.inf)

    def _logpdf(self, x):
        k, lam = self.shape, self.scale
        t = np.where(x > 0, x, 1.0) / lam
        val = math.log(k / lam) + (k - 1.0) * np.log(t) - t**k
        at_zero = math.log(1.0 / lam) if k == 1.0 else (np.inf if k < 1.0 else -np.inf)
        return np.where(x > 0, val, np.where(x == 0, at_zero, -np.inf))

    def _cdf(self, x):
        t = np.maximum(x, 0.0) / self.scale
        return -np.expm1(-(t**self.shape))

    def _sf(self, x):
        t = np.maximum(x, 0.0) / self.scale
        return np.exp(-(t**self.shape))

    def _ppf(self, p):
        return self.scale * (-np.log1p(-p)) ** (1.0 / self.shape)

    def mean(self):
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    def variance(self):
        g1 = math.gamma(1.0 + 1.0 / self.shape)
        g2 = math.gamma(1.0 + 2.0 / self.shape)
        return self.scale**2 * (g2 - g1 * g1)


@dataclass(frozen=True)
class Cauchy(LocationScaleFamily):
    loc: float = 0.0
    scale: float = 1.0
    family = Family.CAUCHY
    _positive_params = ("scale",)

    def __post_init__(self):
        _finite("loc", self.loc)
        _positive("scale", self.scale)

    def support(self):
        return Interval(-math.inf, math.inf)

    def _logpdf(self, x):
        z = (x - self.loc) / self.scale
        return -math.log(math.pi * self.scale) - np.log1p(z * z)

    def _cdf(self, x):
        return 0.5 + np.arctan((x - self.loc) / self.scale) / math.pi

    def _sf(self, x):
        return 0.5 + np.arctan((self.loc - x) / self.scale) / math.pi

    def _ppf(self, p):
        return self.loc + self.scale * np.tan(math.pi * (p - 0.5))


@dataclass(frozen=True)
class Pareto(ScaleFamily):
    shape: float = 1.0
    scale: float = 1.0
    family = Family.PARETO
    _positive_params = ("shape", "scale")

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("scale", self.scale)

    def support(self):
        return Interval(self.scale, math.inf)

    def _logpdf(self, x):
        a, xm = self.shape, self.scale
        xp = np.where(x >= xm, x, xm)
        val = math.log(a) + a * math.log(xm) - (a + 1.0) * np.log(xp)
        return np.where(x >= xm, val, -np.inf)

    def _cdf(self, x):
        xp = np.maximum(x, self.scale)
        return 0.0 - np.expm1(self.shape * np.log(self.scale / xp))

    def _sf(self, x):
        xp = np.maximum(x, self.scale)
        return np.exp(self.shape * np.log(self.scale / xp))

    def _ppf(self, p):
        return self.scale * np.exp(-np.log1p(-p) / self.shape)


_BY_FAMILY = {
    Family.NORMAL: Normal,
    Family.EXPONENTIAL: Exponential,
    Family.GAMMA: Gamma,
    Family.LOGNORMAL: LogNormal,
    Family.LOGISTIC: Logistic,
    Family.WEIBULL: Weibull,
    Family.CAUCHY: Cauchy,
    Family.PARETO: Pareto,
}


def make_distribution(family: Family | str, *values: float) -> BaseDistribution:
    """Build a family from positional parameter values in canonical order."""
    return _BY_FAMILY[Family(family)](*values)
