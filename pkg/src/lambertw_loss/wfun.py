"""Real branches of the Lambert W function.

``W(x)`` solves ``w * exp(w) = x``. On the reals there are two branches:
the principal branch ``W0`` (values >= -1, defined for x >= -1/e) and the
non-principal branch ``W-1`` (values <= -1, defined for -1/e <= x < 0).

Evaluation uses Halley iteration. Starting values come from the series
about the branch point -1/e, a log-based approximation for moderate
arguments and the asymptotic expansion ``L1 - L2 + L2/L1`` elsewhere. For
large |w| the iteration runs on the logarithmic form ``w + ln|w| = ln|x|``,
which never overflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BranchId",
    "WEvaluation",
    "DomainError",
    "ConvergenceError",
    "SingularityError",
    "BRANCH_POINT",
    "w0",
    "wm1",
    "lambert_w0",
    "lambert_wm1",
    "w_deriv",
]

BRANCH_POINT = -math.exp(-1.0)

# 1/e split into a double and its rounding error, so that x + 1/e is
# accurate near the branch point.
_INV_E_HI = 0.36787944117144233
_INV_E_LO = -1.2428753672788363e-17

_SNAP_TOL = 1e-15
_MAX_ITER = 50
_STEP_TOL = 2.0 * np.finfo(float).eps
_RESID_TOL = 4.0 * np.finfo(float).eps
_SERIES_LIMIT = -0.25
_FINAL_STEP = 1e-6

# Coefficients of W = sum c_k p^k with p = +-sqrt(2(ex + 1)).
_BRANCH_SERIES = (
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
)


class DomainError(ValueError):
    """Argument lies outside the real domain of the requested branch."""


class ConvergenceError(ArithmeticError):
    """Halley iteration did not converge within the iteration cap."""


class SingularityError(ZeroDivisionError):
    """Derivative requested at the branch point, where it is infinite."""


class BranchId(enum.Enum):
    PRINCIPAL = 0
    NON_PRINCIPAL = -1


@dataclass(frozen=True)
class WEvaluation:
    """A real W value tagged with its branch and the residual |w e^w - x|."""

    value: float
    branch: BranchId
    residual: float

    def __float__(self) -> float:
        return self.value


def _shifted(x):
    """Return e*x + 1, computed without cancellation near x = -1/e."""
    return ((x + _INV_E_HI) + _INV_E_LO) * math.e


def _branch_series(x, sign):
    p = sign * np.sqrt(2.0 * np.maximum(_shifted(x), 0.0))
    w = np.zeros_like(p)
    for c in reversed(_BRANCH_SERIES):
        w = w * p + c
    return w


def _halley_plain(x, w):
    """Halley iteration on w e^w - x = 0, updating only unconverged entries."""
    idx = np.arange(x.size)
    xi, wi = x, w.copy()
    for _ in range(_MAX_ITER):
        if idx.size == 0:
            return w
        ew = np.exp(wi)
        f = wi * ew - xi
        wp1 = wi + 1.0
        # near the branch point the step is rounding noise / tiny slope, so
        # a residual at rounding level also counts as converged
        small = np.abs(f) <= _RESID_TOL * np.abs(xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = f / (ew * wp1 - (wi + 2.0) * f / (2.0 * wp1))
        step = np.where(small | ~np.isfinite(step), 0.0, step)
        wi = wi - step
        w[idx] = wi
        done = small | _finished(step, wi)
        keep = ~done
        idx, xi, wi = idx[keep], xi[keep], wi[keep]
    if idx.size:
        raise ConvergenceError(f"no convergence after {_MAX_ITER} iterations")
    return w


def _finished(step, w):
    # cubic convergence: away from the branch point a step below 1e-6 leaves
    # an error of order 1e-18 after it is applied
    a = np.abs(step)
    tol = np.where(np.abs(w + 1.0) > 0.1, _FINAL_STEP, _STEP_TOL)
    return a <= tol * (1.0 + np.abs(w))


def _halley_log(logx, w):
    """Halley iteration on w + ln|w| - ln|x| = 0 (for |w| well away from 1)."""
    idx = np.arange(logx.size)
    li, wi = logx, w.copy()
    for _ in range(_MAX_ITER):
        if idx.size == 0:
            return w
        g = wi + np.log(np.abs(wi)) - li
        g1 = 1.0 + 1.0 / wi
        g2 = -1.0 / (wi * wi)
        step = g / (g1 - g * g2 / (2.0 * g1))
        wi = wi - step
        w[idx] = wi
        keep = ~_finished(step, wi)
        idx, li, wi = idx[keep], li[keep], wi[keep]
    if idx.size:
        raise ConvergenceError(f"no convergence after {_MAX_ITER} iterations")
    return w


def lambert_w0(x) -> np.ndarray:
    """Principal branch W0, vectorised.

    Parameters
    ----------
    x : array_like
        Arguments. Entries below -1/e (beyond a 1e-15 snapping band) give NaN.

    Returns
    -------
    numpy.ndarray
        W0(x), same shape as ``x``.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.full(flat.shape, np.nan)

    near = np.abs(flat - BRANCH_POINT) <= _SNAP_TOL
    out[near] = -1.0
    ok = ~near & (flat > BRANCH_POINT)
    out[ok & np.isposinf(flat)] = np.inf
    ok &= np.isfinite(flat)

    series = ok & (flat < _SERIES_LIMIT)
    if series.any():
        xs = flat[series]
        out[series] = _halley_plain(xs, _branch_series(xs, 1.0))

    mid = ok & (flat >= _SERIES_LIMIT) & (flat <= math.e)
    if mid.any():
        xm = flat[mid]
        l1 = np.log1p(xm)
        guess = l1 * (1.0 - np.log1p(l1) / (2.0 + l1))
        out[mid] = _halley_plain(xm, guess)

    big = ok & (flat > math.e)
    if big.any():
        logx = np.log(flat[big])
        l2 = np.log(logx)
        out[big] = _halley_log(logx, logx - l2 + l2 / logx)

    return out.reshape(x.shape)


def lambert_wm1(x) -> np.ndarray:
    """Non-principal branch W-1, vectorised.

    Entries outside [-1/e, 0] give NaN; x = 0 gives -inf (the limit value).
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.full(flat.shape, np.nan)

    near = np.abs(flat - BRANCH_POINT) <= _SNAP_TOL
    out[near] = -1.0
    out[flat == 0.0] = -np.inf
    ok = ~near & (flat > BRANCH_POINT) & (flat < 0.0)

    series = ok & (flat < _SERIES_LIMIT)
    if series.any():
        xs = flat[series]
        out[series] = _halley_plain(xs, _branch_series(xs, -1.0))

    tail = ok & (flat >= _SERIES_LIMIT)
    if tail.any():
        logx = np.log(-flat[tail])
        l2 = np.log(-logx)
        out[tail] = _halley_log(logx, logx - l2 + l2 / logx)

    return out.reshape(x.shape)


def _residual(w: float, x: float) -> float:
    if w == -1.0 and abs(x - BRANCH_POINT) <= _SNAP_TOL:
        return abs(x - BRANCH_POINT)
    if abs(w) > 2.0 and x != 0.0:
        # w e^w = x * exp(w + ln|w| - ln|x|); avoids overflow for huge x
        return abs(x * math.expm1(w + math.log(abs(w)) - math.log(abs(x))))
    return abs(w * math.exp(w) - x)


def w0(x: float) -> WEvaluation:
    """Principal branch W0(x) for x >= -1/e.

    >>> round(w0(1.0).value, 7)
    0.5671433
    """
    x = float(x)
    if math.isnan(x) or (x < BRANCH_POINT and abs(x - BRANCH_POINT) > _SNAP_TOL):
        raise DomainError(f"W0 is not real for x={x!r} < -1/e")
    w = float(lambert_w0(np.array([x]))[0])
    return WEvaluation(w, BranchId.PRINCIPAL, _residual(w, x))


def wm1(x: float) -> WEvaluation:
    """Non-principal branch W-1(x) for -1/e <= x < 0."""
    x = float(x)
    below = x < BRANCH_POINT and abs(x - BRANCH_POINT) > _SNAP_TOL
    if math.isnan(x) or below or x >= 0.0:
        raise DomainError(f"W-1 is only real on [-1/e, 0), got x={x!r}")
    w = float(lambert_wm1(np.array([x]))[0])
    return WEvaluation(w, BranchId.NON_PRINCIPAL, _residual(w, x))


def w_deriv(branch: BranchId, gamma: float, z: float) -> float:
    """Derivative of W(gamma*z) with respect to z on the given branch.

    Equals ``gamma * exp(-W) / (1 + W)``; infinite at gamma*z = -1/e.
    """
    x = gamma * z
    if branch is BranchId.PRINCIPAL:
        w = w0(x).value
    else:
        w = wm1(x).value
    if abs(1.0 + w) <= 1e-12:
        raise SingularityError(f"dW/dz is infinite at gamma*z={x!r} (branch point)")
    return gamma * math.exp(-w) / (1.0 + w)
