"""Command-line entry point: ``python -m multipen <subcommand> ...``.

Exit status: 0 on success, 2 on usage errors, 1 on numerical or I/O failure.
``certify`` exits 3 when the recovery condition does not hold.
"""
from __future__ import annotations

import argparse
import math
import shlex
import sys

import numpy as np

from . import conditions, experiments, io, solvers
from .linalg import IndexSet

EXIT_FAILURE = 1


def beta_value(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid beta {text!r}") from None
    if not value > 0 or math.isinf(value):
        raise argparse.ArgumentTypeError(f"beta must be positive or 'inf', got {text!r}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def index_list(text: str) -> list[int]:
    try:
        idx = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid support {text!r}") from None
    if any(i < 0 for i in idx) or len(set(idx)) != len(idx):
        raise argparse.ArgumentTypeError(f"support must be distinct nonnegative indices, got {text!r}")
    return sorted(idx)


def beta_list(text: str) -> list[float]:
    return [beta_value(t) for t in text.split(",") if t.strip()]


def geometric(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be 'start,ratio,count', got {text!r}")
    try:
        return experiments.geometric_grid(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}: {exc}") from None


def linear(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be 'lo,hi,count', got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None
    if count < 1 or not hi >= lo:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}")
    return np.linspace(lo, hi, count)


def entry_std(text: str) -> float | None:
    if text == "sqrtm":
        return None
    return positive_float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multipen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("certify", help="recovery certificate for one support")
    p.add_argument("--matrix", required=True)
    p.add_argument("--beta", type=beta_value, required=True)
    p.add_argument("--support", type=index_list, required=True)
    p.add_argument("--c", type=positive_float)
    p.add_argument("--d", type=positive_float)

    p = sub.add_parser("region", help="admissible-parameter geometry over all k-supports")
    p.add_argument("--matrix", required=True)
    p.add_argument("--beta", type=beta_value, required=True)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--all-sizes", action="store_true", help="enumerate every size 1..k")
    p.add_argument("--theta-samples", metavar="FILE.csv")
    p.add_argument("--theta-points", type=positive_int, default=50)

    p = sub.add_parser("solve", help="single- or multi-penalty reconstruction")
    p.add_argument("--matrix", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=positive_float, required=True)
    p.add_argument("--beta", type=beta_value, required=True)
    p.add_argument("--mode", choices=("reduced", "alternating"), default="reduced")
    p.add_argument("--outer", type=positive_int, default=50)
    p.add_argument("--inner", type=positive_int, default=50)
    p.add_argument("--max-iters", type=positive_int, default=100_000)
    p.add_argument("--tol", type=nonnegative_float)
    p.add_argument("--u-out", default="u.txt")
    p.add_argument("--v-out", default="v.txt")

    def ensemble_flags(p, m, n, betas):
        p.add_argument("--m", type=positive_int, default=m)
        p.add_argument("--n", type=positive_int, default=n)
        p.add_argument("--k", type=positive_int, default=3)
        p.add_argument("--betas", type=beta_list, default=beta_list(betas))
        p.add_argument("--matrices", type=positive_int, default=20)
        p.add_argument("--entry-std", type=entry_std, default=None, help="number or 'sqrtm' (default)")
        p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
        p.add_argument("--out", required=True)
        p.add_argument("--per-matrix", metavar="FILE.csv")

    p = sub.add_parser("mc-conditions", help="condition failure percentages over Gaussian matrices")
    ensemble_flags(p, 30, 60, "inf,10,1,0.1")

    p = sub.add_parser("mc-region", help="R / Sigma / Theta statistics over Gaussian matrices")
    ensemble_flags(p, 60, 80, "0.1,0.3,0.5,1,5")
    p.add_argument("--theta-samples", metavar="FILE.csv")
    p.add_argument("--theta-grid", type=linear, default=linear("0,100,51"), help="lo,hi,count")

    p = sub.add_parser("mc-recovery", help="grid-search comparison of single- and multi-penalty ISTA")
    p.add_argument("--problems", type=positive_int, default=30)
    p.add_argument("--m", type=positive_int, default=50)
    p.add_argument("--n", type=positive_int, default=100)
    p.add_argument("--k", type=positive_int, default=7)
    p.add_argument("--c", type=positive_float, default=1.5)
    p.add_argument("--d", type=nonnegative_float, default=0.3)
    p.add_argument("--ceiling", type=positive_float, default=2.5)
    p.add_argument("--alpha-grid", type=geometric, default=geometric("0.0002,1.25,51"))
    p.add_argument("--beta-grid", type=geometric, default=geometric("0.01,1.15,31"))
    p.add_argument("--outer", type=positive_int, default=50)
    p.add_argument("--inner", type=positive_int, default=50)
    p.add_argument("--select", choices=("ae", "sd"), default="ae")
    p.add_argument("--entry-std", type=entry_std, default=None)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.add_argument("--summary", metavar="FILE.csv")

    p = sub.add_parser("gen-matrix", help="write one ensemble matrix")
    p.add_argument("--m", type=positive_int, required=True)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--entry-std", type=entry_std, default=None)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen-signal", help="write a random (u, v) pair and optionally y = A(u + v)")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=positive_float, default=1.5)
    p.add_argument("--d", type=nonnegative_float, default=0.3)
    p.add_argument("--ceiling", type=positive_float, default=2.5)
    p.add_argument("--support", type=index_list)
    p.add_argument("--strict-noise", action="store_true", help="||v||_inf strictly below d")
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    p.add_argument("--matrix")
    p.add_argument("--data-out")
    p.add_argument("--u-out", default="u_true.txt")
    p.add_argument("--v-out", default="v_true.txt")
    return parser


def parse_args(argv) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    args.argv = list(argv)
    return args


def _config_line(args) -> str:
    return " ".join(shlex.quote(a) for a in args.argv)


def _print_kv(**items):
    for key, value in items.items():
        print(f"{key}={io.fmt6(value) if not isinstance(value, str) else value}")


def _stat_row(s):
    return [s.count, s.excluded, s.median, s.mean, s.std_dev, s.minimum, s.maximum]


STAT_HEADER = ["count", "excluded", "median", "mean", "std_dev", "minimum", "maximum"]


def cmd_certify(args) -> int:
    A = io.read_matrix(args.matrix)
    I = IndexSet.of(args.support, A.shape[1])
    cert = conditions.certificate(A, args.beta, I)
    _print_kv(
        support=",".join(map(str, I.indices)),
        beta=args.beta,
        condition_value=cert.condition_value,
        cd_bound=cert.cd_bound,
        alpha_min_per_d=cert.alpha_min_per_d,
        s_value=cert.s_value,
        sigma_value=cert.sigma_value,
        n_value=cert.n_value,
        satisfiable=cert.satisfiable,
    )
    if args.c is not None and args.d is not None:
        if not args.c > args.d:
            print("error: --c must exceed --d", file=sys.stderr)
            return 2
        iv = cert.alpha_interval(args.c, args.d)
        if iv is None:
            _print_kv(alpha_interval="empty")
        else:
            _print_kv(alpha_lo=iv[0], alpha_hi=iv[1])
    return 0


def cmd_region(args) -> int:
    A = io.read_matrix(args.matrix)
    table = conditions.support_table(A, args.beta, args.k, all_sizes=args.all_sizes)
    summ = conditions.summarize_table(table, args.k)
    _print_kv(
        beta=summ.beta, k=summ.k, r_value=summ.r_value, sigma_value=summ.sigma_value,
        theta_min=summ.theta_min, worst_support=",".join(map(str, summ.worst_support.indices)),
        failure_fraction=summ.failure_fraction, supports=len(table),
    )
    if args.theta_samples:
        finite_s = table.s[np.isfinite(table.s)]
        lo = summ.r_value if math.isfinite(summ.r_value) else float(finite_s.max())
        grid = np.linspace(lo, 10 * lo, args.theta_points)
        curve = table.theta_max(grid)
        io.write_report(
            ([t, tm, summ.theta_min] for t, tm in zip(grid, curve)),
            args.theta_samples, ["theta_arg", "theta_max", "theta_min"], _config_line(args),
        )
    return 0


def cmd_solve(args) -> int:
    A = io.read_matrix(args.matrix)
    y = io.read_vector(args.data)
    if y.size != A.shape[0]:
        print(f"error: data length {y.size} != matrix rows {A.shape[0]}", file=sys.stderr)
        return 2
    params = solvers.PenaltyParams(args.alpha, args.beta)
    if args.mode == "reduced":
        tol = 1e-10 if args.tol is None else args.tol
        res = solvers.solve_multi_reduced(A, y, params, max_iters=args.max_iters, tol=tol)
    else:
        res = solvers.solve_multi_alternating(A, y, params, args.outer, args.inner, tol=args.tol)
    io.write_vector(args.u_out, res.u)
    io.write_vector(args.v_out, res.v)
    objective = solvers.multi_objective(A, y, args.alpha, args.beta, res.u, res.v)
    _print_kv(
        iterations=res.iterations, objective=objective, optimality_residual=res.optimality_residual,
        support=",".join(map(str, solvers.support(res.u).indices)),
    )
    return 0


def _ensemble(args) -> experiments.EnsembleSpec:
    return experiments.EnsembleSpec(args.m, args.n, args.matrices, args.entry_std, args.seed)


def cmd_mc_conditions(args) -> int:
    study = experiments.condition_failure_study(_ensemble(args), args.k, args.betas)
    config = _config_line(args)
    io.write_report(
        ([b] + _stat_row(s) for b, s in zip(study.betas, study.summaries)),
        args.out, ["beta"] + STAT_HEADER, config,
    )
    if args.per_matrix:
        rows = ([i, b, study.fractions[i, j]] for i in range(study.fractions.shape[0]) for j, b in enumerate(study.betas))
        io.write_report(rows, args.per_matrix, ["matrix", "beta", "failure_fraction"], config)
    for b, s in zip(study.betas, study.summaries):
        print(f"beta={io.fmt6(b)} median={io.fmt6(s.median)} mean={io.fmt6(s.mean)} std={io.fmt6(s.std_dev)}")
    return 0


def cmd_mc_region(args) -> int:
    grid = args.theta_grid if args.theta_samples else None
    study = experiments.region_study(_ensemble(args), args.k, args.betas, theta_grid=grid)
    config = _config_line(args)
    rows = []
    for name, summaries, values in (
        ("R", study.r_summaries, study.r),
        ("Sigma", study.sigma_summaries, study.sigma),
        ("Theta_min", study.theta_min_summaries, study.theta_min),
    ):
        for j, (b, s) in enumerate(zip(study.betas, summaries)):
            if s is None:       # every matrix infinite
                rows.append([name, b, 0, values.shape[0]] + [math.inf] * 5)
            else:
                rows.append([name, b] + _stat_row(s))
    io.write_report(rows, args.out, ["quantity", "beta"] + STAT_HEADER, config)
    if args.per_matrix:
        io.write_report(
            ([i, b, study.r[i, j], study.sigma[i, j], study.theta_min[i, j], study.failure[i, j]]
             for i in range(study.r.shape[0]) for j, b in enumerate(study.betas)),
            args.per_matrix, ["matrix", "beta", "r", "sigma", "theta_min", "failure_fraction"], config,
        )
    if args.theta_samples:
        io.write_report(
            ([i, b, t, study.theta_max[i, j, g]]
             for i in range(study.r.shape[0]) for j, b in enumerate(study.betas)
             for g, t in enumerate(study.theta_grid)),
            args.theta_samples, ["matrix", "beta", "theta_arg", "theta_max"], config,
        )
    for row in rows:
        print(",".join(io.fmt6(x) for x in row))
    return 0


def cmd_mc_recovery(args) -> int:
    signal = experiments.SignalSpec(args.n, args.k, args.c, args.ceiling, args.d)
    ensemble = experiments.EnsembleSpec(args.m, args.n, args.problems, args.entry_std, args.seed)
    study = experiments.grid_search_recovery(
        args.problems, signal, ensemble, args.alpha_grid, args.beta_grid,
        outer_iters=args.outer, inner_iters=args.inner, select=args.select,
    )
    config = _config_line(args)
    io.write_report(
        ([r.trial_id, r.method, r.chosen_alpha, r.chosen_beta, r.ae, r.sd] for r in study.records),
        args.out, ["trial_id", "method", "chosen_alpha", "chosen_beta", "ae", "sd"], config,
    )
    rows = [[method, metric] + _stat_row(s) for method, stats in study.summaries.items() for metric, s in stats.items()]
    if args.summary:
        io.write_report(rows, args.summary, ["method", "metric"] + STAT_HEADER, config)
    for row in rows:
        print(",".join(io.fmt6(x) for x in row))
    return 0


def cmd_gen_matrix(args) -> int:
    spec = experiments.EnsembleSpec(args.m, args.n, args.index + 1, args.entry_std, args.seed)
    io.write_matrix(args.out, experiments.gaussian_matrix(spec, args.index))
    return 0


def cmd_gen_signal(args) -> int:
    spec = experiments.SignalSpec(args.n, args.k, args.c, args.ceiling, args.d, exact_noise=not args.strict_noise)
    I = None
    if args.support is not None:
        if len(args.support) != args.k:
            print("error: --support must list exactly k indices", file=sys.stderr)
            return 2
        I = IndexSet.of(args.support, args.n)
    u, v = experiments.sample_signal(spec, I, np.random.default_rng([args.seed, 0, 2]))
    io.write_vector(args.u_out, u)
    io.write_vector(args.v_out, v)
    if args.matrix:
        A = io.read_matrix(args.matrix)
        if A.shape[1] != args.n:
            print(f"error: matrix has {A.shape[1]} columns, expected {args.n}", file=sys.stderr)
            return 2
        io.write_vector(args.data_out or "y.txt", A @ (u + v))
    return 0


COMMANDS = {
    "certify": cmd_certify,
    "region": cmd_region,
    "solve": cmd_solve,
    "mc-conditions": cmd_mc_conditions,
    "mc-region": cmd_mc_region,
    "mc-recovery": cmd_mc_recovery,
    "gen-matrix": cmd_gen_matrix,
    "gen-signal": cmd_gen_signal,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = parse_args(argv)
    try:
        return COMMANDS[args.subcommand](args)
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, FloatingPointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
