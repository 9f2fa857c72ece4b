"""Exact support recovery certificates and admissible parameter regions.

For a support ``I`` with complement ``J`` and the regularized operator
``A_beta`` (``A`` itself for ``beta = inf``) write ``Ginv = (A_{beta,I}^T A_I)^{-1}``
and define the four per-support quantities

    q_I     = || A_{beta,J}^T A_I Ginv ||
    n_I     = || A_{beta,J}^T (A_I Ginv A_{beta,I}^T - Id) A ||
    sigma_I = || Ginv ||
    s_I     = || Ginv A_{beta,I}^T A ||

all in the induced l-infinity norm. When ``q_I < 1`` every signal/noise pair with
``min |u_I| > c`` and ``||v||_inf < d`` has its support recovered for any

    d * n_I / (1 - q_I) <= alpha < (c - d * s_I) / sigma_I,

an interval that is nonempty exactly when ``c / d > s_I + n_I * sigma_I / (1 - q_I)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .linalg import (
    SINGULAR_COND,
    IndexSet,
    SingularGram,
    as_matrix,
    check_beta,
    gram_inverse_apply,
    inf_op_norm,
    regularized_gram,
    regularized_operator,
    restrict_columns,
)

DEFAULT_ENUMERATION_CAP = 10**7
DEFAULT_CHUNK = 1024


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    support: IndexSet
    beta: float
    condition_value: float
    cd_bound: float
    alpha_min_per_d: float
    s_value: float
    sigma_value: float
    n_value: float

    @property
    def satisfiable(self) -> bool:
        return self.condition_value < 1

    def alpha_interval(self, c: float, d: float) -> tuple[float, float] | None:
        """Half-open interval ``[lo, hi)`` of admissible alpha, or None if empty."""
        if not (c > d > 0):
            raise ValueError(f"need c > d > 0, got c={c}, d={d}")
        if not self.satisfiable:
            return None
        lo = d * self.alpha_min_per_d
        hi = (c - d * self.s_value) / self.sigma_value
        if not lo < hi:
            return None
        return lo, hi

    def theta_max(self, theta_arg: float) -> float:
        return (theta_arg - self.s_value) / self.sigma_value


def certificate(A, beta: float, I: IndexSet) -> Certificate:
    """All recovery-condition quantities for one support, computed directly."""
    A = as_matrix(A)
    beta = check_beta(beta)
    J = I.complement()
    AI = restrict_columns(A, I)
    Ab = regularized_operator(A, beta)
    AbI, AbJ = restrict_columns(Ab, I), restrict_columns(Ab, J)
    try:
        Ginv = gram_inverse_apply(A, beta, I, np.eye(len(I)))
    except SingularGram:
        inf = math.inf
        return Certificate(I, beta, inf, inf, inf, inf, inf, inf)

    q = inf_op_norm(AbJ.T @ AI @ Ginv)
    n = inf_op_norm(AbJ.T @ (AI @ Ginv @ AbI.T - np.eye(A.shape[0])) @ A)
    sigma = inf_op_norm(Ginv)
    s = inf_op_norm(Ginv @ AbI.T @ A)
    if q < 1:
        theta_min = n / (1 - q)
        cd = s + theta_min * sigma
    else:
        theta_min = cd = math.inf
    return Certificate(I, beta, q, cd, theta_min, s, sigma, n)


def condition_value(A, beta: float, I: IndexSet) -> float:
    return certificate(A, beta, I).condition_value


def cd_bound(A, beta: float, I: IndexSet) -> float:
    return certificate(A, beta, I).cd_bound


def alpha_interval(A, beta: float, I: IndexSet, c: float, d: float):
    return certificate(A, beta, I).alpha_interval(c, d)


# --- exhaustive enumeration ------------------------------------------------


def support_count(N: int, k: int, all_sizes: bool = False) -> int:
    if all_sizes:
        return sum(comb(N, j) for j in range(1, k + 1))
    return comb(N, k)


def iter_support_chunks(N: int, k: int, chunk: int = DEFAULT_CHUNK):
    """Lexicographic size-k supports as ``(chunk, k)`` integer arrays."""
    it = itertools.combinations(range(N), k)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.intp).reshape(len(block), k)


def batch_quantities(G: np.ndarray, S: np.ndarray, full: bool = True):
    """Per-support ``(q, n, sigma, s)`` for a stack of supports ``S`` (b x k).

    ``G`` is the symmetric matrix ``A_beta^T A``. Singular Gram blocks yield
    ``inf`` for every quantity. With ``full=False`` only ``q`` is computed.
    """
    b, k = S.shape
    N = G.shape[0]
    GI = G[S]                                   # rows I of G: (b, k, N)
    gram = np.take_along_axis(GI, np.broadcast_to(S[:, None, :], (b, k, k)), axis=2)
    singular = np.linalg.cond(gram) > SINGULAR_COND
    gram[singular] = np.eye(k)
    Ginv = np.linalg.inv(gram)

    in_support = np.zeros((b, N), dtype=bool)
    np.put_along_axis(in_support, S, True, axis=1)

    C = np.swapaxes(GI, 1, 2) @ Ginv            # A_beta^T A_I Ginv: (b, N, k)
    rows = np.abs(C).sum(axis=2)
    rows[in_support] = 0.0
    q = rows.max(axis=1)
    q[singular] = np.inf
    if not full:
        return q

    rows = np.abs(C @ GI - G).sum(axis=2)
    rows[in_support] = 0.0
    n = rows.max(axis=1)
    sigma = np.abs(Ginv).sum(axis=2).max(axis=1)
    s = np.abs(Ginv @ GI).sum(axis=2).max(axis=1)
    for arr in (n, sigma, s):
        arr[singular] = np.inf
    return q, n, sigma, s


@dataclass
class SupportTable:
    """Per-support quantities for every enumerated support, in lexicographic order."""

    beta: float
    N: int
    blocks: list[np.ndarray]
    q: np.ndarray
    n: np.ndarray | None = None
    sigma: np.ndarray | None = None
    s: np.ndarray | None = None
    _offsets: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._offsets = list(itertools.accumulate(len(b) for b in self.blocks))

    def __len__(self):
        return len(self.q)

    def support_at(self, pos: int) -> IndexSet:
        start = 0
        for block, end in zip(self.blocks, self._offsets):
            if pos < end:
                return IndexSet(tuple(block[pos - start]), self.N)
            start = end
        raise IndexError(pos)

    @property
    def failed(self) -> np.ndarray:
        return ~(self.q < 1)

    @property
    def theta_min(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.failed, np.inf, self.n / (1 - self.q))

    @property
    def cd(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.where(self.failed, np.inf, self.s + self.theta_min * self.sigma)

    def theta_max(self, theta_arg) -> np.ndarray | float:
        """Minimum over supports of ``(theta_arg - s_I) / sigma_I``; vectorized in theta_arg."""
        ok = np.isfinite(self.sigma)
        s, sigma = self.s[ok], self.sigma[ok]
        theta = np.atleast_1d(np.asarray(theta_arg, dtype=float))
        out = np.array([np.min((t - s) / sigma) for t in theta])
        return out if np.ndim(theta_arg) else float(out[0])


def support_table(
    A,
    beta: float,
    k: int,
    *,
    all_sizes: bool = False,
    full: bool = True,
    chunk: int = DEFAULT_CHUNK,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> SupportTable:
    """Evaluate the recovery quantities on every support of size k (or 1..k)."""
    A = as_matrix(A)
    beta = check_beta(beta)
    m, N = A.shape
    if not 1 <= k <= min(m, N):
        raise ValueError(f"k must be in [1, min(m, N)] = [1, {min(m, N)}], got {k}")
    total = support_count(N, k, all_sizes)
    if total > cap:
        raise EnumerationTooLarge(f"{total} supports exceed the enumeration cap {cap}")

    G = regularized_gram(A, beta)
    sizes = range(1, k + 1) if all_sizes else (k,)
    blocks, parts = [], []
    for size in sizes:
        for S in iter_support_chunks(N, size, chunk):
            blocks.append(S)
            parts.append(batch_quantities(G, S, full))
    if full:
        q, n, sigma, s = (np.concatenate(x) for x in zip(*parts))
        return SupportTable(beta, N, blocks, q, n, sigma, s)
    return SupportTable(beta, N, blocks, np.concatenate(parts))


@dataclass(frozen=True)
class RegionSummary:
    beta: float
    k: int
    r_value: float
    sigma_value: float
    theta_min: float
    worst_support: IndexSet
    failure_fraction: float


def summarize_table(table: SupportTable, k: int) -> RegionSummary:
    cd = table.cd
    worst = int(np.argmax(cd))
    finite_sigma = table.sigma[np.isfinite(table.sigma)]
    return RegionSummary(
        beta=table.beta,
        k=k,
        r_value=float(cd[worst]),
        sigma_value=float(finite_sigma.max()) if finite_sigma.size else math.inf,
        theta_min=float(table.theta_min.max()),
        worst_support=table.support_at(worst),
        failure_fraction=float(table.failed.mean()),
    )


def region_summary(A, beta: float, k: int, **kwargs) -> RegionSummary:
    """Class-level recovery geometry over all supports of size k.

    ``r_value`` is the smallest signal-to-noise ratio that guarantees recovery
    of every such support, ``sigma_value`` the parameter sensitivity and
    ``theta_min`` the largest lower bound on ``alpha / ||v||_inf``.
    """
    return summarize_table(support_table(A, beta, k, **kwargs), k)


def failure_fraction(A, beta: float, k: int, **kwargs) -> float:
    return float(support_table(A, beta, k, full=False, **kwargs).failed.mean())


def theta_max(A, beta: float, k: int, theta_arg, **kwargs):
    return support_table(A, beta, k, **kwargs).theta_max(theta_arg)
