"""Lambert W x N(mu, sigma): branch densities, moments and pdf shape."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import Normal, _wrap
from .transform import LambertLocationScale
from .wfun import lambert_w0, lambert_wm1

__all__ = [
    "WNormalParams",
    "ShapeRegime",
    "LOWER_REGIME_BOUND",
    "UPPER_REGIME_BOUND",
    "branch_density_f0",
    "branch_density_fm1",
    "pdf",
    "cdf",
    "mean",
    "variance",
    "skewness",
    "shape_regime",
    "extrema_locations",
    "asymptote_location",
]

LOWER_REGIME_BOUND = math.sqrt(2.0) - 1.0
UPPER_REGIME_BOUND = math.sqrt(2.0) + 1.0
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class WNormalParams:
    mu: float = 0.0
    sigma: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma!r}")

    def distribution(self) -> LambertLocationScale:
        return LambertLocationScale(Normal(self.mu, self.sigma), self.gamma)


class ShapeRegime(enum.Enum):
    TWO_EXTREMA_PRINCIPAL = "two_extrema_principal"
    MONOTONE_DECREASING = "monotone_decreasing"
    TWO_EXTREMA_NON_PRINCIPAL = "two_extrema_non_principal"


def _component(w, gamma):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _INV_SQRT_2PI * np.exp(-w * w / (2.0 * gamma * gamma) - w) / (1.0 + w)


def branch_density_f0(z, gamma: float):
    """Principal-branch component of the standard Lambert W x N(0,1) density.

    ``+inf`` at ``z = -1/(gamma e)``; NaN below it.
    """
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    w = lambert_w0(gamma * np.asarray(z, dtype=float))
    return _wrap(z, _component(w, gamma))


def branch_density_fm1(z, gamma: float):
    """Non-principal-branch component; negative inside its region.

    Defined for ``gamma * z`` in ``[-1/e, 0)``; ``-inf`` at the pole and
    NaN elsewhere. It is subtracted from ``f0`` to form the density.
    """
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    x = gamma * np.asarray(z, dtype=float)
    w = lambert_wm1(np.where(x < 0, x, np.nan))
    return _wrap(z, _component(w, gamma))


def pdf(p: WNormalParams, y):
    return p.distribution().pdf(y)


def cdf(p: WNormalParams, y):
    return p.distribution().cdf(y)


def mean(p: WNormalParams) -> float:
    g = p.gamma
    return p.mu + p.sigma * g * math.exp(g * g / 2.0)


def variance(p: WNormalParams) -> float:
    g2 = p.gamma**2
    return p.sigma**2 * math.exp(g2) * (math.exp(g2) * (1.0 + 4.0 * g2) - g2)


def skewness(p: WNormalParams | float) -> float:
    """Skewness coefficient; depends on gamma only.

    The exponentials are factored out as ``exp(3 gamma^2 / 2)`` so large
    gamma does not overflow the intermediate terms.
    """
    g = p.gamma if isinstance(p, WNormalParams) else float(p)
    g2 = g * g
    num = (9.0 + 27.0 * g2) - math.exp(-2.0 * g2) * (3.0 + 12.0 * g2) + 2.0 * g2 * math.exp(-3.0 * g2)
    den = (1.0 + 4.0 * g2) - g2 * math.exp(-g2)
    try:
        growth = math.exp(1.5 * g2)
    except OverflowError:
        return math.copysign(math.inf, g)
    return g * growth * num / den**1.5


def shape_regime(gamma: float) -> ShapeRegime:
    """Shape of the density as a function of |gamma|.

    The boundary values sqrt(2) -+ 1 are assigned to the monotone regime.
    """
    a = abs(gamma)
    if a == 0:
        raise ValueError("gamma = 0 is the untransformed normal; no regime")
    if a < LOWER_REGIME_BOUND:
        return ShapeRegime.TWO_EXTREMA_PRINCIPAL
    if a <= UPPER_REGIME_BOUND:
        return ShapeRegime.MONOTONE_DECREASING
    return ShapeRegime.TWO_EXTREMA_NON_PRINCIPAL


def extrema_locations(gamma: float) -> list[float]:
    """Stationary points (in z) of the branch component that has them.

    Solves ``W^2 + (1 + gamma^2) W + 2 gamma^2 = 0`` for W, keeps the roots
    admissible for the relevant branch and maps back through
    ``z = W e^W / gamma``. Empty in the monotone regime.
    """
    regime = shape_regime(gamma)
    if regime is ShapeRegime.MONOTONE_DECREASING:
        return []
    g = abs(gamma)
    g2 = g * g
    disc = g2 * g2 - 6.0 * g2 + 1.0
    root = math.sqrt(max(disc, 0.0))
    ws = [(-1.0 - g2 - root) / 2.0, (-1.0 - g2 + root) / 2.0]
    if regime is ShapeRegime.TWO_EXTREMA_PRINCIPAL:
        ws = [w for w in ws if w > -1.0]
    else:
        ws = [w for w in ws if w < -1.0]
    # negative gamma mirrors the density through z -> -z
    zs = [w * math.exp(w) / gamma for w in ws]
    return sorted(zs)


def asymptote_location(p: WNormalParams) -> float:
    """Point ``mu - sigma/(gamma e)`` where the density has its pole."""
    if p.gamma == 0:
        raise ValueError("gamma = 0 has no asymptote")
    return p.mu - p.sigma / (p.gamma * math.e)
