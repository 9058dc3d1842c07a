"""Command-line interface: ``fit``, ``compare``, ``curve`` and ``sample``.

Exit codes: 0 success (a non-converged fit only prints a warning), 1 usage
error, 2 data error, 3 numerical infeasibility.
"""

from __future__ import annotations

import argparse
import csv
import enum
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import InvalidParameterError
from .estimation import MODELS, InfeasibleStartError, InsufficientDataError, build_distribution, mle_fit
from .model_selection import aic, bic, compare, log_shift

__all__ = ["EXIT_OK", "EXIT_USAGE", "EXIT_DATA", "EXIT_INFEASIBLE", "Dataset", "DataError", "ingest", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    """Unreadable or malformed input data."""


class Transform(enum.Enum):
    NONE = "none"
    LOG_SHIFT = "log_shift"


@dataclass(frozen=True)
class Dataset:
    id: str
    values: np.ndarray
    source_path: str
    transform_applied: Transform = Transform.NONE


def _sniff_delimiter(header: str) -> str:
    return "\t" if header.count("\t") > header.count(",") else ","


def ingest(path, column: str | None = None) -> Dataset:
    """Read one numeric column from a headered comma or tab separated file.

    Raises
    ------
    DataError
        Missing file, missing column, non-numeric cell (with its line
        number) or no data rows.
    """
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise DataError(f"{path}: missing header row")
    reader = csv.reader(lines, delimiter=_sniff_delimiter(lines[0]))
    header = [h.strip() for h in next(reader)]
    rows = [(i, r) for i, r in enumerate(reader, start=2) if any(c.strip() for c in r)]

    if column is not None:
        if column not in header:
            raise DataError(f"{path}: no column {column!r} (have {', '.join(header)})")
        idx = header.index(column)
    elif len(header) == 1:
        idx = 0
    else:
        numeric = [j for j in range(len(header)) if rows and all(_is_number(_cell(r, j)) for _, r in rows)]
        if len(numeric) != 1:
            raise DataError(f"{path}: {len(numeric)} numeric columns found; choose one with --column")
        idx = numeric[0]

    values = []
    for line_no, r in rows:
        cell = _cell(r, idx)
        try:
            v = float(cell)
        except ValueError:
            raise DataError(f"{path}: line {line_no}: non-numeric value {cell!r}") from None
        if not math.isfinite(v):
            raise DataError(f"{path}: line {line_no}: non-finite value {cell!r}")
        values.append(v)
    if not values:
        raise DataError(f"{path}: no data rows")
    return Dataset(p.stem, np.array(values), str(p))


def _cell(row, j) -> str:
    return row[j].strip() if j < len(row) else ""


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _num(v: float, full: bool) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v) if full else f"{v:.6g}"


def _parse_params(model: str, text: str | None) -> dict[str, float]:
    names = MODELS[model].names
    if not text:
        raise UsageError(f"--params is required for {model}: {','.join(n + '=...' for n in names)}")
    out = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise UsageError(f"bad --params entry {item!r}; expected names {', '.join(names)}")
        try:
            out[key] = float(val)
        except ValueError:
            raise UsageError(f"--params value for {key} is not a number: {val!r}") from None
    missing = [n for n in names if n not in out]
    if missing:
        raise UsageError(f"--params missing {', '.join(missing)}")
    return out


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise UsageError(f"--grid must be MIN:MAX:POINTS, got {text!r}") from None
    if len(parts) != 3 or n < 2 or not hi > lo:
        raise UsageError(f"--grid needs MIN < MAX and POINTS >= 2, got {text!r}")
    return lo, hi, n


def _load(args) -> Dataset:
    if not args.data:
        raise UsageError("--data is required")
    ds = ingest(args.data, args.column)
    if args.log_shift:
        try:
            shifted, _ = log_shift(ds.values)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        ds = Dataset(ds.id, shifted, ds.source_path, Transform.LOG_SHIFT)
    return ds


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_model(model: str | None) -> str:
    if not model:
        raise UsageError("--model is required")
    if model not in MODELS:
        raise UsageError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    return model


def run_fit(args) -> int:
    model = _check_model(args.model)
    ds = _load(args)
    try:
        res = mle_fit(model, ds.values, seed=args.seed)
    except InsufficientDataError as exc:
        raise DataError(str(exc)) from None
    full = args.full_precision
    k, n = res.n_params, res.n_obs
    lines = [f"model\t{model}", f"dataset\t{ds.id}", f"n\t{n}"]
    lines += [f"{p.name}\t{_num(p.value, full)}" for p in res.params.entries]
    lines += [
        f"loglik\t{_num(res.loglik, full)}",
        f"aic\t{_num(aic(res.loglik, k), full)}",
        f"bic\t{_num(bic(res.loglik, k, n), full)}",
        f"converged\t{str(res.converged).lower()}",
        f"iterations\t{res.iterations}",
    ]
    print("\n".join(lines))
    if not res.converged:
        print(f"warning: {model} fit did not converge: {res.message}", file=sys.stderr)
    if args.out:
        record = {
            "model": model,
            "dataset": ds.id,
            "transform": ds.transform_applied.value,
            "n": n,
            "params": res.params.as_dict(),
            "start_params": res.start_params.as_dict(),
            "loglik": res.loglik,
            "aic": aic(res.loglik, k),
            "bic": bic(res.loglik, k, n),
            "converged": res.converged,
            "iterations": res.iterations,
            "message": res.message,
        }
        Path(args.out).write_text(json.dumps(record, indent=2) + "\n")
    return EXIT_OK


def run_compare(args) -> int:
    if args.models is None:
        ids = list(MODELS)
    else:
        ids = [m.strip() for m in args.models.split(",") if m.strip()]
        if not ids:
            raise UsageError("--models is empty")
        bad = [m for m in ids if m not in MODELS]
        if bad:
            raise UsageError(f"unknown model(s) {', '.join(bad)}")
    ds = _load(args)
    table = compare(ds.values, ids, dataset_id=ds.id, seed=args.seed)
    full = args.full_precision
    delim = "\t" if args.out and args.out.endswith((".tsv", ".tab")) else ","
    text = table.to_delimited(delim, full)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for crit in ("aic", "bic"):
        top = ", ".join(f"{r.model_id} {_num(getattr(r, crit), full)}" for r in table.top(crit, 3))
        print(f"top3 {crit}: {top}", file=sys.stderr if not args.out else sys.stdout)
    for r in table.rows:
        if r.error:
            print(f"warning: {r.model_id} failed: {r.error}", file=sys.stderr)
        elif not r.converged:
            print(f"warning: {r.model_id} fit did not converge", file=sys.stderr)
    return EXIT_OK


def run_curve(args) -> int:
    model = _check_model(args.model)
    params = _parse_params(model, args.params)
    if not args.grid:
        raise UsageError("--grid is required")
    lo, hi, npts = _parse_grid(args.grid)
    dist = build_distribution(model, params)
    y = np.linspace(lo, hi, npts)
    with np.errstate(all="ignore"):
        pdf = np.asarray(dist.pdf(y), dtype=float)
        cdf = np.asarray(dist.cdf(y), dtype=float)
    full = args.full_precision
    rows = ["y,pdf,cdf"] + [f"{_num(a, full)},{_num(b, full)},{_num(c, full)}" for a, b, c in zip(y, pdf, cdf)]
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def run_sample(args) -> int:
    model = _check_model(args.model)
    params = _parse_params(model, args.params)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    dist = build_distribution(model, params)
    draws = dist.sample(args.n, args.seed)
    lo, hi = dist.support()
    full = args.full_precision

    def fmt(v):
        s = _num(v, full)
        # rounding must not push a draw onto or past a finite support end
        if float(s) <= lo < v or v < hi <= float(s):
            return repr(float(v))
        return s

    _emit("".join(fmt(v) + "\n" for v in draws), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--data", help="headered comma or tab separated file")
    common.add_argument("--column", help="column to read (default: the single numeric column)")
    common.add_argument("--model", help=f"one of {', '.join(MODELS)}")
    common.add_argument("--models", help="comma separated model ids (compare)")
    common.add_argument("--params", help="name=value,... (curve, sample)")
    common.add_argument("--log-shift", action="store_true", help="apply ln(y) - min ln(y) + 1e-10")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int)
    common.add_argument("--grid", help="MIN:MAX:POINTS")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--full-precision", action="store_true", help="shortest round-trip floats")

    parser = _Parser(prog="lambertw-loss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, func, text in [
        ("fit", run_fit, "maximum likelihood fit of one model"),
        ("compare", run_compare, "fit several models and rank by AIC/BIC"),
        ("curve", run_curve, "write y,pdf,cdf over a grid"),
        ("sample", run_sample, "write seeded random draws"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.set_defaults(func=func)
    return parser


def _join_grid(argv):
    # "--grid -1:4:500" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--grid={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_join_grid(argv))
        if getattr(args, "func", None) is None:
            raise UsageError("a command is required: fit, compare, curve or sample")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InfeasibleStartError, InvalidParameterError, ArithmeticError, ValueError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
