"""Write y,pdf,cdf curves for the W x N and W x Exp gamma grids to CSV files.

The files feed any external plotter. Usage:
python scripts/density_curves.py --outdir curves
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from lambertw_loss.lambert_exponential import WExpParams
from lambertw_loss.lambert_normal import WNormalParams

WN_GAMMAS = (0.2, 0.3, 0.4142, 0.5, 2.5, 3.0)
WE_GAMMAS = (-0.5, -0.04, 0.0, 0.096, 0.3)


def write(path, dist, y):
    with np.errstate(all="ignore"):
        rows = zip(y, dist.pdf(y), dist.cdf(y))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y", "pdf", "cdf"])
        w.writerows((f"{a:.6g}", f"{b:.6g}", f"{c:.6g}") for a, b, c in rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="curves")
    ap.add_argument("--points", type=int, default=801)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for g in WN_GAMMAS:
        d = WNormalParams(0.0, 1.0, g).distribution()
        lo = d.support().lower
        write(out / f"wnormal_g{g}.csv", d, np.linspace(lo, 4.0, args.points))
    for g in WE_GAMMAS:
        d = WExpParams(1.0, g).distribution()
        hi = d.support().upper if g < 0 else 5.0
        write(out / f"wexp_g{g}.csv", d, np.linspace(0.0, min(hi, 5.0), args.points))
    print(f"wrote {len(WN_GAMMAS) + len(WE_GAMMAS)} files to {out}/")


if __name__ == "__main__":
    main()
