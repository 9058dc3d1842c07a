"""Lambert W x Exp(lambda): ``Y = X exp(gamma * lambda * X)``, X ~ Exp(lambda).

The generic scale transform is used with ``sigma = 1 / lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import Exponential
from .transform import LambertScale

__all__ = [
    "WExpParams",
    "MomentNotFiniteError",
    "SKEWNESS_MINIMUM",
    "pdf",
    "cdf",
    "kth_moment",
    "skewness",
    "upper_bound",
]

# attained at gamma = -1
SKEWNESS_MINIMUM = -9.0 * math.sqrt(15.0) / 50.0


class MomentNotFiniteError(ArithmeticError):
    """The requested moment is infinite for this gamma."""


@dataclass(frozen=True)
class WExpParams:
    lam: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be > 0, got {self.lam!r}")

    def distribution(self) -> LambertScale:
        return LambertScale(Exponential(self.lam), self.gamma)


def pdf(p: WExpParams, y):
    return p.distribution().pdf(y)


def cdf(p: WExpParams, y):
    return p.distribution().cdf(y)


def kth_moment(p: WExpParams, k: int) -> float:
    """Raw moment ``E Y^k = k! / (lambda^k (1 - k gamma)^(k+1))``, finite iff gamma < 1/k."""
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    k = int(k)
    if p.gamma * k >= 1.0:
        raise MomentNotFiniteError(f"E[Y^{k}] is infinite for gamma={p.gamma} >= 1/{k}")
    return math.factorial(k) / (p.lam**k * (1.0 - k * p.gamma) ** (k + 1))


def skewness(p: WExpParams | float) -> float:
    """Skewness coefficient for gamma < 1/3 (independent of lambda)."""
    g = p.gamma if isinstance(p, WExpParams) else float(p)
    if g >= 1.0 / 3.0:
        raise MomentNotFiniteError(f"third moment is infinite for gamma={g} >= 1/3")
    a = 1.0 - g
    b = 1.0 - 2.0 * g
    c = 1.0 - 3.0 * g
    scale = 2.0 * math.sqrt(b**9 / (2.0 * g**4 - 2.0 * g + 1.0) ** 3)
    return scale * (3.0 * a**4 * (a**2 * b**3 - c**4) / (c**4 * b**3) + 1.0)


def upper_bound(p: WExpParams) -> float:
    """Right end ``-1/(e gamma lambda)`` of the support when gamma < 0."""
    if p.gamma >= 0:
        raise ValueError("support is unbounded above for gamma >= 0")
    return -1.0 / (math.e * p.gamma * p.lam)
