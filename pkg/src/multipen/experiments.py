"""Seeded Monte-Carlo studies over Gaussian measurement ensembles.

Every random quantity is drawn from a stream keyed by ``(master_seed, index, ...)``
so that results do not depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conditions import DEFAULT_ENUMERATION_CAP, summarize_table, support_table
from .linalg import IndexSet
from .solvers import ZERO_TOL, alternating_grid, ista_l1_grid, power_norm_sq, STEP_FACTOR

DEFAULT_SEED = 20160701


class EmptyInput(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleSpec:
    m: int
    N: int
    matrix_count: int = 20
    entry_std: float | None = None      # None -> 1/sqrt(m)
    master_seed: int = DEFAULT_SEED
    kind: str = "gaussian"              # or "identity" (test hook)

    def __post_init__(self):
        if self.m < 1 or self.N < 1 or self.matrix_count < 1:
            raise ValueError("m, N and matrix_count must be positive")
        if self.entry_std is not None and not self.entry_std > 0:
            raise ValueError("entry_std must be positive")
        if self.kind not in ("gaussian", "identity"):
            raise ValueError(f"unknown ensemble kind {self.kind!r}")

    @property
    def std(self) -> float:
        return 1.0 / math.sqrt(self.m) if self.entry_std is None else self.entry_std


@dataclass(frozen=True)
class SignalSpec:
    N: int
    k: int
    c: float = 1.5
    magnitude_ceiling: float = 2.5
    d: float = 0.3
    exact_noise: bool = True    # ||v||_inf == d; otherwise strictly below d

    def __post_init__(self):
        if not 0 <= self.k <= self.N:
            raise ValueError("need 0 <= k <= N")
        if not (self.c > 0 and self.d >= 0 and self.magnitude_ceiling >= self.c):
            raise ValueError("need c > 0, d >= 0 and magnitude_ceiling >= c")


@dataclass(frozen=True)
class StatSummary:
    median: float
    mean: float
    std_dev: float
    minimum: float
    maximum: float
    count: int
    excluded: int = 0           # non-finite inputs left out


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    method: str                 # "single" | "multi"
    chosen_alpha: float
    chosen_beta: float
    ae: float
    sd: int


def summarize(values, ddof: int = 0) -> StatSummary:
    """Median, mean, std (population by default), min and max of the finite values."""
    x = np.asarray(list(values), dtype=float)
    finite = x[np.isfinite(x)]
    if finite.size == 0:
        raise EmptyInput("no finite values to summarize")
    std = float(np.std(finite, ddof=ddof)) if finite.size > ddof else 0.0
    return StatSummary(
        median=float(np.median(finite)),
        mean=float(np.mean(finite)),
        std_dev=std,
        minimum=float(finite.min()),
        maximum=float(finite.max()),
        count=int(finite.size),
        excluded=int(x.size - finite.size),
    )


def geometric_grid(start: float, ratio: float, count: int) -> np.ndarray:
    """``start * ratio**i`` for ``i = 0 .. count-1``."""
    if count < 1 or not start > 0 or not ratio > 0:
        raise ValueError("grid needs start > 0, ratio > 0 and count >= 1")
    return start * ratio ** np.arange(count)


def gaussian_matrix(spec: EnsembleSpec, index: int) -> np.ndarray:
    if not 0 <= index < spec.matrix_count:
        raise IndexError(f"matrix index {index} outside [0, {spec.matrix_count})")
    if spec.kind == "identity":
        return np.eye(spec.m, spec.N)
    rng = np.random.default_rng([spec.master_seed, index])
    return rng.normal(0.0, spec.std, size=(spec.m, spec.N))


def sample_signal(spec: SignalSpec, I: IndexSet | None, rng: np.random.Generator):
    """Draw ``(u_true, v)`` with ``supp(u_true) = I`` and ``min |u_I| > c``.

    ``I=None`` draws the support uniformly among size-k subsets. Noise entries are
    uniform on [-1, 1], rescaled to ``||v||_inf = d`` (or to a random level
    strictly below d when ``exact_noise`` is off).
    """
    if I is None:
        idx = np.sort(rng.choice(spec.N, size=spec.k, replace=False))
    else:
        idx = I.array()
    u = np.zeros(spec.N)
    signs = rng.choice([-1.0, 1.0], size=idx.size)
    # uniform on (c, ceiling]
    mags = spec.magnitude_ceiling - rng.uniform(0.0, 1.0, size=idx.size) * (spec.magnitude_ceiling - spec.c)
    mags = np.maximum(mags, np.nextafter(spec.c, np.inf))
    u[idx] = signs * mags

    v = rng.uniform(-1.0, 1.0, size=spec.N)
    peak = np.abs(v).max()
    if spec.exact_noise:
        v *= spec.d / peak
    else:
        r = 1.0 - rng.uniform(0.0, 1.0)       # (0, 1]
        v *= 0.99 * r * spec.d / peak
    return u, v


# --- condition studies ---------------------------------------------------------


@dataclass
class ConditionStudy:
    betas: list[float]
    fractions: np.ndarray               # (matrices, betas)
    summaries: list[StatSummary]


def condition_failure_study(spec: EnsembleSpec, k: int, betas, cap: int = DEFAULT_ENUMERATION_CAP) -> ConditionStudy:
    """Fraction of size-k supports failing the recovery condition, per matrix and beta."""
    betas = [float(b) for b in betas]
    frac = np.empty((spec.matrix_count, len(betas)))
    for i in range(spec.matrix_count):
        A = gaussian_matrix(spec, i)
        for j, beta in enumerate(betas):
            frac[i, j] = support_table(A, beta, k, full=False, cap=cap).failed.mean()
    return ConditionStudy(betas, frac, [summarize(frac[:, j]) for j in range(len(betas))])


@dataclass
class RegionStudy:
    betas: list[float]
    r: np.ndarray                       # (matrices, betas); inf where the condition fails
    sigma: np.ndarray
    theta_min: np.ndarray
    failure: np.ndarray
    r_summaries: list[StatSummary | None]
    sigma_summaries: list[StatSummary]
    theta_min_summaries: list[StatSummary | None]
    theta_grid: np.ndarray | None = None
    theta_max: np.ndarray | None = None  # (matrices, betas, grid)


def _maybe_summary(values):
    try:
        return summarize(values)
    except EmptyInput:
        return None


def region_study(spec: EnsembleSpec, k: int, betas, theta_grid=None, cap: int = DEFAULT_ENUMERATION_CAP) -> RegionStudy:
    """R, Sigma and Theta_min per matrix and beta; infinite R values are excluded from summaries."""
    betas = [float(b) for b in betas]
    shape = (spec.matrix_count, len(betas))
    r, sigma, tmin, fail = (np.empty(shape) for _ in range(4))
    curves = None
    if theta_grid is not None:
        theta_grid = np.asarray(theta_grid, dtype=float)
        curves = np.empty(shape + (theta_grid.size,))
    for i in range(spec.matrix_count):
        A = gaussian_matrix(spec, i)
        for j, beta in enumerate(betas):
            table = support_table(A, beta, k, cap=cap)
            summ = summarize_table(table, k)
            r[i, j], sigma[i, j] = summ.r_value, summ.sigma_value
            tmin[i, j], fail[i, j] = summ.theta_min, summ.failure_fraction
            if curves is not None:
                curves[i, j] = table.theta_max(theta_grid)
    return RegionStudy(
        betas, r, sigma, tmin, fail,
        [_maybe_summary(r[:, j]) for j in range(len(betas))],
        [summarize(sigma[:, j]) for j in range(len(betas))],
        [_maybe_summary(tmin[:, j]) for j in range(len(betas))],
        theta_grid, curves,
    )


# --- solver comparison ----------------------------------------------------------


@dataclass
class ProblemCandidates:
    """Scores of every grid candidate for one problem, single and multi."""

    alphas: np.ndarray
    single_ae: np.ndarray
    single_sd: np.ndarray
    multi_alpha: np.ndarray
    multi_beta: np.ndarray
    multi_ae: np.ndarray
    multi_sd: np.ndarray


@dataclass
class RecoveryStudy:
    records: list[TrialRecord]
    summaries: dict[str, dict[str, StatSummary]]
    candidates: list[ProblemCandidates] = field(default_factory=list, repr=False)
    select: str = "ae"

    def method(self, name: str) -> list[TrialRecord]:
        return [r for r in self.records if r.method == name]

    def with_selection(self, select: str) -> "RecoveryStudy":
        """Same candidate runs, best solutions re-chosen by another metric."""
        return _build_study(self.candidates, select)


def _scores(U, u_true, zero_tol):
    ae = np.linalg.norm(U - u_true[:, None], axis=0)
    sd = ((np.abs(U) > zero_tol) != (u_true != 0)[:, None]).sum(axis=0)
    return ae, sd


def _select(ae, sd, alphas, betas, select):
    keys = (betas, alphas, ae, sd) if select == "sd" else (betas, alphas, sd, ae)
    return int(np.lexsort(keys)[0])


def _build_study(candidates: list[ProblemCandidates], select: str) -> RecoveryStudy:
    if select not in ("ae", "sd"):
        raise ValueError(f"select must be 'ae' or 'sd', got {select!r}")
    records = []
    for p, c in enumerate(candidates):
        i = _select(c.single_ae, c.single_sd, c.alphas, np.full(c.alphas.size, np.inf), select)
        records.append(TrialRecord(p, "single", float(c.alphas[i]), math.inf, float(c.single_ae[i]), int(c.single_sd[i])))
        j = _select(c.multi_ae, c.multi_sd, c.multi_alpha, c.multi_beta, select)
        records.append(TrialRecord(p, "multi", float(c.multi_alpha[j]), float(c.multi_beta[j]), float(c.multi_ae[j]), int(c.multi_sd[j])))

    summaries = {}
    for name in ("single", "multi"):
        rows = [r for r in records if r.method == name]
        summaries[name] = {
            "ae": summarize([r.ae for r in rows]),
            "sd": summarize([r.sd for r in rows]),
            "alpha": summarize([r.chosen_alpha for r in rows]),
        }
        if name == "multi" and any(math.isfinite(r.chosen_beta) for r in rows):
            summaries[name]["beta"] = summarize([r.chosen_beta for r in rows])
    return RecoveryStudy(records, summaries, candidates, select)


def grid_search_recovery(
    problem_count: int,
    signal: SignalSpec,
    ensemble: EnsembleSpec,
    alpha_grid,
    beta_grid,
    *,
    outer_iters: int = 50,
    inner_iters: int = 50,
    select: str = "ae",
    include_single_in_multi: bool = False,
    zero_tol: float = ZERO_TOL,
) -> RecoveryStudy:
    """Best single- and multi-penalty reconstructions per random problem.

    Multi-penalty candidates come from alternating minimization on every
    (alpha, beta) grid pair; single-penalty candidates from ISTA with the same
    total number of gradient steps on every alpha. The best candidate minimizes
    AE (``select="ae"``) or SD (``select="sd"``), ties broken by the other
    metric, then smaller alpha, then smaller beta.
    """
    alphas = np.asarray(alpha_grid, dtype=float)
    betas = np.asarray(beta_grid, dtype=float)
    if alphas.size == 0 or betas.size == 0:
        raise ValueError("parameter grids must be nonempty")
    ens = EnsembleSpec(ensemble.m, ensemble.N, problem_count, ensemble.entry_std, ensemble.master_seed, ensemble.kind)

    candidates = []
    for p in range(problem_count):
        A = gaussian_matrix(ens, p)
        rng = np.random.default_rng([ens.master_seed, p, 1])
        u_true, v = sample_signal(signal, None, rng)
        y = A @ (u_true + v)
        step = STEP_FACTOR / power_norm_sq(A)

        ae, sd = _scores(ista_l1_grid(A, y, alphas, outer_iters * inner_iters, step), u_true, zero_tol)
        Um = alternating_grid(A, y, alphas, betas, outer_iters, inner_iters, step)
        Um = np.moveaxis(Um, 1, 0).reshape(A.shape[1], -1)     # columns: beta-major, alpha-minor
        cand_a = np.tile(alphas, betas.size)
        cand_b = np.repeat(betas, alphas.size)
        ae_m, sd_m = _scores(Um, u_true, zero_tol)
        if include_single_in_multi:
            ae_m, sd_m = np.concatenate([ae_m, ae]), np.concatenate([sd_m, sd])
            cand_a = np.concatenate([cand_a, alphas])
            cand_b = np.concatenate([cand_b, np.full(alphas.size, np.inf)])
        candidates.append(ProblemCandidates(alphas, ae, sd, cand_a, cand_b, ae_m, sd_m))
    return _build_study(candidates, select)
