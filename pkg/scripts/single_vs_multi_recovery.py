"""Best-on-grid single- vs multi-penalty reconstructions of 7-sparse signals, 50x100 matrices.

    python3 scripts/single_vs_multi_recovery.py [--problems 30] [--select sd]

Both selection rules are printed; ``--select`` only picks which one is listed
first.
"""
import argparse

from multipen import EnsembleSpec, SignalSpec, geometric_grid, grid_search_recovery


def _report(study, label):
    print(f"-- best solution chosen by {label}")
    print(f"{'method':>7} {'AE min':>8} {'AE mean':>8} {'AE max':>8} {'SD min':>7} {'SD mean':>8} {'SD max':>7}")
    for name in ("single", "multi"):
        ae, sd = study.summaries[name]["ae"], study.summaries[name]["sd"]
        print(f"{name:>7} {ae.minimum:8.3f} {ae.mean:8.3f} {ae.maximum:8.3f} {sd.minimum:7.0f} {sd.mean:8.2f} {sd.maximum:7.0f}")
    beta = study.summaries["multi"].get("beta")
    if beta is not None:
        print(f"chosen beta: min {beta.minimum:.4g} mean {beta.mean:.4g} max {beta.maximum:.4g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=30)
    ap.add_argument("--m", type=int, default=50)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--k", type=int, default=7)
    ap.add_argument("--c", type=float, default=1.5)
    ap.add_argument("--d", type=float, default=0.3)
    ap.add_argument("--outer", type=int, default=50)
    ap.add_argument("--inner", type=int, default=50)
    ap.add_argument("--select", choices=("ae", "sd"), default="ae")
    ap.add_argument("--entry-std", type=float, default=None, help="default 1/sqrt(m)")
    ap.add_argument("--seed", type=int, default=20160701)
    args = ap.parse_args()

    study = grid_search_recovery(
        args.problems,
        SignalSpec(args.n, args.k, c=args.c, d=args.d),
        EnsembleSpec(args.m, args.n, args.problems, args.entry_std, args.seed),
        geometric_grid(0.0002, 1.25, 51),
        geometric_grid(0.01, 1.15, 31),
        outer_iters=args.outer,
        inner_iters=args.inner,
        select=args.select,
    )
    other = "sd" if args.select == "ae" else "ae"
    _report(study, args.select.upper())
    _report(study.with_selection(other), other.upper())


if __name__ == "__main__":
    main()
