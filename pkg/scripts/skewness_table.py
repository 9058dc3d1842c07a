"""Skewness coefficient of W x N and W x Exp over a gamma grid."""

import argparse

import numpy as np

from lambertw_loss import lambert_normal as lnorm
from lambertw_loss.experiments import skewness_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=-1.0)
    ap.add_argument("--hi", type=float, default=2.5)
    ap.add_argument("--step", type=float, default=0.1)
    args = ap.parse_args()
    grid = np.round(np.arange(args.lo, args.hi + args.step / 2, args.step), 10)
    print(f"{'gamma':>7} {'W x N':>14} {'W x Exp':>10}  regime")
    for g, sn, se in skewness_table(grid):
        regime = lnorm.shape_regime(g).name.lower() if g != 0 else "normal"
        se_txt = "inf" if np.isnan(se) else f"{se:.4f}"
        print(f"{g:7.2f} {sn:14.6g} {se_txt:>10}  {regime}")


if __name__ == "__main__":
    main()
