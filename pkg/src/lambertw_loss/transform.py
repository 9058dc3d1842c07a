"""Lambert W transformed random variables.

Given a base variable ``X`` with location ``mu`` and scale ``sigma``, the
transformed variable is ``Y = mu + sigma * U * exp(gamma * U)`` with
``U = (X - mu) / sigma``. Scale families use ``mu = 0``.

With ``z = (y - mu) / sigma`` the event ``{Y <= y}`` is decided by the sign
and size of ``gamma * z``:

* ``gamma*z >= 0``: only the principal branch is involved;
* ``-1/e < gamma*z < 0``: both real branches are involved;
* ``gamma*z < -1/e``: outside the support (cdf 0 for gamma > 0, 1 for
  gamma < 0).

The same three-region rule covers both signs of gamma. In the two-branch
region the density is

    f(y) = f_X(x0) exp(-W0) / (1 + W0) - f_X(x1) exp(-W-1) / (1 + W-1)

with ``x_k = mu + sigma * W_k(gamma z) / gamma``; the second term is
positive because ``1 + W-1 < 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .distributions import (
    BaseDistribution,
    Interval,
    LocationScaleFamily,
    ScaleFamily,
    _check_prob,
    _wrap,
)
from .wfun import BRANCH_POINT, lambert_w0, lambert_wm1

__all__ = [
    "OVERFLOW_LIMIT",
    "forward",
    "ls_forward",
    "LambertLocationScale",
    "LambertScale",
    "ls_cdf",
    "ls_pdf",
    "scale_cdf",
    "scale_pdf",
    "support",
    "sample",
    "quantile",
]

OVERFLOW_LIMIT = 700.0
_BOUNDARY_TOL = 1e-15


def forward(u, gamma: float):
    """Map ``u -> u * exp(gamma * u)``; the sign of ``u`` is preserved."""
    ua = np.asarray(u, dtype=float)
    t = gamma * ua
    if np.any(t > OVERFLOW_LIMIT):
        raise OverflowError(f"gamma*u exceeds {OVERFLOW_LIMIT}; exp would overflow")
    return _wrap(u, ua * np.exp(t))


def ls_forward(x, mu: float, sigma: float, gamma: float):
    """Location-scale version of :func:`forward`."""
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    u = (np.asarray(x, dtype=float) - mu) / sigma
    return _wrap(x, mu + sigma * np.asarray(forward(u, gamma)))


class _LambertBase:
    base: BaseDistribution
    gamma: float

    @property
    def loc(self) -> float:
        raise NotImplementedError

    @property
    def scale(self) -> float:
        return self.base.scale

    def _pole_value(self) -> float:
        raise NotImplementedError

    @property
    def bound(self) -> float:
        """Finite support end ``mu - sigma / (gamma e)`` (gamma != 0)."""
        if self.gamma == 0:
            raise ValueError("gamma = 0 has no transform bound")
        return self.loc - self.scale / (self.gamma * math.e)

    def _regions(self, y):
        x = self.gamma * (y - self.loc) / self.scale
        boundary = np.abs(x - BRANCH_POINT) <= _BOUNDARY_TOL
        beyond = (x < BRANCH_POINT) & ~boundary
        two = (x > BRANCH_POINT) & (x < 0) & ~boundary
        prin = x >= 0
        return x, boundary, beyond, two, prin

    def _pre(self, x):
        # tiny gamma sends far points to +-inf, which is the right limit
        with np.errstate(over="ignore"):
            return self.loc + self.scale * x / self.gamma

    def cdf(self, y):
        ya = np.asarray(y, dtype=float)
        if self.gamma == 0:
            return self.base.cdf(y)
        flat = ya.ravel()
        x, boundary, beyond, two, prin = self._regions(flat)
        out = np.empty(flat.shape)
        out[beyond | boundary] = 0.0 if self.gamma > 0 else 1.0
        out[np.isnan(flat)] = np.nan
        if prin.any():
            out[prin] = self.base.cdf(self._pre(lambert_w0(x[prin])))
        if two.any():
            xt = x[two]
            x0 = self._pre(lambert_w0(xt))
            x1 = self._pre(lambert_wm1(xt))
            if self.gamma > 0:
                out[two] = self.base.cdf(x0) - self.base.cdf(x1)
            else:
                out[two] = self.base.cdf(x0) + self.base.sf(x1)
        return _wrap(y, np.clip(out, 0.0, 1.0).reshape(ya.shape))

    def logpdf(self, y):
        """Log-density; finite at every interior point of the support."""
        ya = np.asarray(y, dtype=float)
        if self.gamma == 0:
            return self.base.logpdf(y)
        flat = ya.ravel()
        x, boundary, beyond, two, prin = self._regions(flat)
        out = np.full(flat.shape, -np.inf)
        out[np.isnan(flat)] = np.nan
        out[boundary] = math.log(self._pole_value()) if self._pole_value() > 0 else -np.inf
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if prin.any():
                w = lambert_w0(x[prin])
                out[prin] = np.asarray(self.base.logpdf(self._pre(w))) - w - np.log1p(w)
            if two.any():
                xt = x[two]
                w = lambert_w0(xt)
                v = lambert_wm1(xt)
                a = np.asarray(self.base.logpdf(self._pre(w))) - w - np.log1p(w)
                b = np.asarray(self.base.logpdf(self._pre(v))) - v - np.log(-1.0 - v)
                b = np.where(np.isnan(b), -np.inf, b)
                out[two] = np.logaddexp(a, b)
        return _wrap(y, out.reshape(ya.shape))

    def pdf(self, y):
        if self.gamma == 0:
            return self.base.pdf(y)
        return _wrap(y, np.exp(np.asarray(self.logpdf(y), dtype=float)))

    def sample(self, n: int, seed=None) -> np.ndarray:
        """Transform ``n`` seeded base draws."""
        x = self.base.sample(n, seed)
        if self.gamma == 0:
            return x
        u = (x - self.loc) / self.scale
        return self.loc + self.scale * forward(u, self.gamma)

    def quantile(self, p):
        """Numeric quantile; exact via the base quantile where W0 alone applies."""
        pa = _check_prob(p)
        if self.gamma == 0:
            return self.base.quantile(p)
        flat = pa.ravel()
        out = np.empty(flat.shape)
        p_loc = float(self.base.cdf(self.loc))
        direct = flat >= p_loc if self.gamma > 0 else flat <= p_loc
        if direct.any():
            xq = np.asarray(self.base.quantile(flat[direct]), dtype=float)
            u = (xq - self.loc) / self.scale
            out[direct] = self.loc + self.scale * u * np.exp(self.gamma * u)
        for i in np.flatnonzero(~direct):
            out[i] = self._two_branch_quantile(flat[i])
        return _wrap(p, out.reshape(pa.shape))

    def _two_branch_quantile(self, p: float) -> float:
        # root search in t = W0(gamma z) on (-1, 0); y - bound ~ (1 + t)^2,
        # so t resolves the region next to the pole much better than y does
        g = self.gamma

        def excess(t):
            v = float(lambert_wm1(t * math.exp(t)))
            lo = float(self.base.cdf(self._pre(t)))
            if g > 0:
                return lo - float(self.base.cdf(self._pre(v))) - p
            return lo + float(self.base.sf(self._pre(v))) - p

        t = optimize.brentq(excess, -1.0, 0.0, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
        return self.loc + self.scale * t * math.exp(t) / g


@dataclass(frozen=True)
class LambertLocationScale(_LambertBase):
    """Location-scale Lambert W x F variable.

    Support is ``(mu - sigma/(gamma e), inf)`` for gamma > 0 and
    ``(-inf, mu - sigma/(gamma e))`` for gamma < 0. The density has an
    integrable pole at the finite end; ``pdf`` returns ``inf`` exactly there.
    """

    base: LocationScaleFamily
    gamma: float = 0.0

    def __post_init__(self):
        if not isinstance(self.base, LocationScaleFamily):
            raise TypeError("base must be a location-scale family")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")

    @property
    def loc(self) -> float:
        return self.base.loc

    def _pole_value(self) -> float:
        return math.inf if self.base.pdf(self.loc - self.scale / self.gamma) > 0 else 0.0

    def support(self) -> Interval:
        if self.gamma > 0:
            return Interval(self.bound, math.inf)
        if self.gamma < 0:
            return Interval(-math.inf, self.bound)
        return self.base.support()


@dataclass(frozen=True)
class LambertScale(_LambertBase):
    """Scale Lambert W x F variable for a non-negative base.

    Support is ``[0, inf)`` for gamma >= 0 and ``(0, -sigma/(gamma e))`` for
    gamma < 0. At and beyond the upper end (gamma < 0) the density is 0.
    """

    base: ScaleFamily
    gamma: float = 0.0

    def __post_init__(self):
        if not isinstance(self.base, ScaleFamily) or self.base.support().lower != 0.0:
            raise TypeError("base must be a scale family supported on [0, inf)")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")

    @property
    def loc(self) -> float:
        return 0.0

    def _pole_value(self) -> float:
        return 0.0

    def support(self) -> Interval:
        if self.gamma < 0:
            return Interval(0.0, self.bound)
        return self.base.support()


def ls_cdf(m: LambertLocationScale, y):
    return m.cdf(y)


def ls_pdf(m: LambertLocationScale, y):
    return m.pdf(y)


def scale_cdf(m: LambertScale, y):
    return m.cdf(y)


def scale_pdf(m: LambertScale, y):
    return m.pdf(y)


def support(m) -> Interval:
    return m.support()


def sample(m, n: int, seed=None) -> np.ndarray:
    return m.sample(n, seed)


def quantile(m, p):
    return m.quantile(p)
