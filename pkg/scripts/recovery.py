"""Simulation recovery at the published US indemnity estimates.

Usage: python scripts/recovery.py [--n 100000] [--seeds 5]
"""

import argparse

from lambertw_loss.estimation import MODELS
from lambertw_loss.experiments import TABLE1_POINTS, RecoveryConfig, run_recovery


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    for model, truth in TABLE1_POINTS.items():
        res = run_recovery(RecoveryConfig(model, truth, n=args.n, seeds=tuple(range(args.seeds))))
        names = MODELS[model].names
        print(f"{model}  truth {dict(zip(names, truth))}  {res.elapsed:.1f}s  converged {sum(res.converged)}/{len(res.converged)}")
        for seed, row in zip(res.config.seeds, res.estimates):
            print(f"  seed {seed}: " + "  ".join(f"{n}={v:.5g}" for n, v in zip(names, row)))
        print("  median rel. error: " + "  ".join(f"{n}={e:.4f}" for n, e in zip(names, res.median_relative_error)))
        print(f"  within {res.config.tolerance:.0%}: {res.passed}")


if __name__ == "__main__":
    main()
