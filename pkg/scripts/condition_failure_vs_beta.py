"""Fraction of 3-sparse supports violating the recovery condition, 30x60 Gaussian matrices.

    python3 scripts/condition_failure_vs_beta.py [--entry-std 1] [--matrices 20]
"""
import argparse
import math

from multipen import EnsembleSpec, condition_failure_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=30)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--matrices", type=int, default=20)
    ap.add_argument("--entry-std", type=float, default=None, help="default 1/sqrt(m)")
    ap.add_argument("--seed", type=int, default=20160701)
    args = ap.parse_args()

    betas = [math.inf, 10.0, 1.0, 0.1]
    spec = EnsembleSpec(args.m, args.n, args.matrices, args.entry_std, args.seed)
    study = condition_failure_study(spec, args.k, betas)
    print(f"{'beta':>6} {'median':>8} {'mean':>8} {'std':>8} {'min':>8} {'max':>8}")
    for beta, s in zip(study.betas, study.summaries):
        print(f"{beta:>6g} {s.median:8.4f} {s.mean:8.4f} {s.std_dev:8.4f} {s.minimum:8.4f} {s.maximum:8.4f}")


if __name__ == "__main__":
    main()
