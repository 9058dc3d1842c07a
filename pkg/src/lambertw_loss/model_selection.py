"""Information criteria, log-shift preprocessing and ranked comparison tables."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .estimation import MODELS, FitResult, mle_fit

__all__ = [
    "aic",
    "bic",
    "ShiftRecord",
    "log_shift",
    "undo_log_shift",
    "ComparisonRow",
    "ComparisonTable",
    "compare",
    "TABLE_HEADER",
]

log = logging.getLogger(__name__)

SHIFT_OFFSET = 1e-10
TABLE_HEADER = ("dataset", "model", "npar", "loglik", "aic", "bic", "rank_aic", "rank_bic", "converged")


def aic(loglik: float, k: int) -> float:
    """Akaike information criterion ``2k - 2 loglik``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2.0 * k - 2.0 * loglik


def bic(loglik: float, k: int, n: int) -> float:
    """Bayesian information criterion ``k ln(n) - 2 loglik``."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    return k * math.log(n) - 2.0 * loglik


@dataclass(frozen=True)
class ShiftRecord:
    """Constant subtracted from ``ln(y)`` and the offset added afterwards."""

    log_min: float
    offset: float = SHIFT_OFFSET


def log_shift(data) -> tuple[np.ndarray, ShiftRecord]:
    """Map positive losses to ``ln(y) - min(ln(y)) + 1e-10``.

    The output minimum is exactly ``1e-10`` and the map is increasing.

    Raises
    ------
    ValueError
        If any value is not strictly positive (or not finite).
    """
    y = np.asarray(data, dtype=float).ravel()
    if y.size == 0:
        raise ValueError("empty data")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise ValueError("log_shift requires finite, strictly positive values")
    ly = np.log(y)
    rec = ShiftRecord(float(ly.min()))
    out = (ly - rec.log_min) + rec.offset
    return out, rec


def undo_log_shift(values, record: ShiftRecord) -> np.ndarray:
    """Inverse of :func:`log_shift` given its record."""
    v = np.asarray(values, dtype=float)
    return np.exp(v - record.offset + record.log_min)


@dataclass(frozen=True)
class ComparisonRow:
    model_id: str
    n_params: int
    loglik: float
    aic: float
    bic: float
    rank_aic: int
    rank_bic: int
    converged: bool
    fit: FitResult | None = field(default=None, compare=False, repr=False)
    error: str = ""


def _ranks(values, n_params, model_ids) -> list[int]:
    # nan scores (failed fits) are ranked last
    def key(i):
        v = values[i]
        return (math.isnan(v), v if not math.isnan(v) else 0.0, n_params[i], model_ids[i])

    order = sorted(range(len(values)), key=key)
    ranks = [0] * len(values)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return ranks


def _fmt(v, full_precision: bool) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v) if full_precision else f"{v:.2f}"


@dataclass(frozen=True)
class ComparisonTable:
    """Ranked AIC/BIC table for one dataset. Rows keep the input model order."""

    dataset_id: str
    rows: tuple[ComparisonRow, ...]

    @classmethod
    def from_fits(cls, dataset_id: str, entries) -> ComparisonTable:
        """Build from ``(model_id, n_params, n_obs, FitResult | None, error)`` entries."""
        entries = list(entries)
        mids = [e[0] for e in entries]
        ks = [e[1] for e in entries]
        lls, aics, bics = [], [], []
        for mid, k, n, fit, _ in entries:
            ll = fit.loglik if fit is not None else -math.inf
            lls.append(ll)
            if math.isfinite(ll):
                aics.append(aic(ll, k))
                bics.append(bic(ll, k, n))
            else:
                aics.append(math.nan)
                bics.append(math.nan)
        ra = _ranks(aics, ks, mids)
        rb = _ranks(bics, ks, mids)
        rows = tuple(
            ComparisonRow(
                mids[i], ks[i], lls[i], aics[i], bics[i], ra[i], rb[i],
                bool(entries[i][3] is not None and entries[i][3].converged), entries[i][3], entries[i][4],
            )
            for i in range(len(entries))
        )
        return cls(dataset_id, rows)

    def ranked(self, criterion: str = "aic") -> list[ComparisonRow]:
        attr = {"aic": "rank_aic", "bic": "rank_bic"}[criterion]
        return sorted(self.rows, key=lambda r: getattr(r, attr))

    def top(self, criterion: str = "aic", k: int = 3) -> list[ComparisonRow]:
        return self.ranked(criterion)[:k]

    def row(self, model_id: str) -> ComparisonRow:
        for r in self.rows:
            if r.model_id == model_id:
                return r
        raise KeyError(model_id)

    def to_records(self, full_precision: bool = False) -> list[list[str]]:
        return [
            [
                self.dataset_id, r.model_id, _fmt(r.n_params, full_precision),
                _fmt(r.loglik, full_precision), _fmt(r.aic, full_precision), _fmt(r.bic, full_precision),
                str(r.rank_aic), str(r.rank_bic), _fmt(r.converged, full_precision),
            ]
            for r in self.rows
        ]

    def to_delimited(self, delimiter: str = ",", full_precision: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        w.writerows(self.to_records(full_precision))
        return buf.getvalue()

    def to_csv(self, full_precision: bool = False) -> str:
        return self.to_delimited(",", full_precision)

    def to_tsv(self, full_precision: bool = False) -> str:
        return self.to_delimited("\t", full_precision)


def compare(data, model_ids=None, dataset_id: str = "data", seed: int = 0) -> ComparisonTable:
    """Fit every model, then rank by AIC and BIC.

    Failures of single fits are recorded in their row (``error`` set,
    log-likelihood ``-inf``, ranked last) rather than raised.
    """
    ids = list(MODELS) if model_ids is None else list(model_ids)
    if not ids:
        raise ValueError("at least one model is required")
    unknown = [m for m in ids if m not in MODELS]
    if unknown:
        raise ValueError(f"unknown model id(s): {', '.join(unknown)}")
    y = np.asarray(data, dtype=float).ravel()
    if y.size == 0:
        raise ValueError("empty data")
    # Lambert models first, then the baselines by parameter count
    order = list(MODELS)
    ordered = sorted(
        ids, key=lambda m: (not MODELS[m].lambert, 0 if MODELS[m].lambert else MODELS[m].n_params, order.index(m))
    )
    entries = []
    for mid in ordered:
        k = MODELS[mid].n_params
        try:
            fit = mle_fit(mid, y, seed=seed)
            entries.append((mid, k, int(y.size), fit, ""))
        except (ValueError, ArithmeticError) as exc:
            log.warning("%s fit failed: %s", mid, exc)
            entries.append((mid, k, int(y.size), None, str(exc)))
    return ComparisonTable.from_fits(dataset_id, entries)
