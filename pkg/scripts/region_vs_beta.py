"""Minimal recoverable SNR (R), sensitivity (Sigma) and Theta_min against beta, 60x80 matrices.

Enumerates all 82160 supports of size 3 per matrix and beta, so the default
run takes roughly ten minutes on one core.

    python3 scripts/region_vs_beta.py [--matrices 20] [--entry-std 1]
"""
import argparse

import numpy as np

from multipen import EnsembleSpec, region_study


def _fmt(s):
    return "all inf" if s is None else f"{s.minimum:10.4g} {s.median:10.4g} {s.maximum:10.4g}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=60)
    ap.add_argument("--n", type=int, default=80)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--matrices", type=int, default=20)
    ap.add_argument("--betas", default="0.1,0.3,0.5,1,5")
    ap.add_argument("--entry-std", type=float, default=None, help="default 1/sqrt(m)")
    ap.add_argument("--seed", type=int, default=20160701)
    args = ap.parse_args()

    betas = [float(b) for b in args.betas.split(",")]
    spec = EnsembleSpec(args.m, args.n, args.matrices, args.entry_std, args.seed)
    study = region_study(spec, args.k, betas)
    print("quantity   beta        min     median        max")
    for j, beta in enumerate(study.betas):
        n_inf = int(np.isinf(study.r[:, j]).sum())
        print(f"R          {beta:<5g} {_fmt(study.r_summaries[j])}   ({n_inf} matrices with R = inf)")
        print(f"Sigma      {beta:<5g} {_fmt(study.sigma_summaries[j])}")
        print(f"Theta_min  {beta:<5g} {_fmt(study.theta_min_summaries[j])}")


if __name__ == "__main__":
    main()
