"""Median relative MLE error (absolute for a zero true value) at n=1e4 versus n=1e5.

Slow: the W x N fits at n=1e5 take 10-25 s each on one core.
Usage: python scripts/consistency.py [--replicates 20] [--model wnormal]
"""

import argparse
import time

from lambertw_loss.estimation import MODELS
from lambertw_loss.experiments import ConsistencyConfig, run_consistency

POINTS = {
    "wnormal": [(13.444, 28.829, 0.789), (0.0, 1.0, 0.2), (0.0, 1.0, -0.5)],
    "wexp": [(0.08, 0.496), (1.0, 0.2), (1.0, -0.3)],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replicates", type=int, default=20)
    ap.add_argument("--model", choices=list(POINTS), action="append")
    args = ap.parse_args()
    for model in args.model or list(POINTS):
        names = MODELS[model].names
        for truth in POINTS[model]:
            t = time.perf_counter()
            res = run_consistency(ConsistencyConfig(model, truth, replicates=args.replicates))
            cells = [
                f"n={n}: " + " ".join(f"{k}={e:.4f}" for k, e in zip(names, res.median_errors[n]))
                for n in res.config.sizes
            ]
            print(f"{model} {truth}  {' | '.join(cells)}  decreasing={res.decreasing}  ({time.perf_counter() - t:.0f}s)", flush=True)


if __name__ == "__main__":
    main()
