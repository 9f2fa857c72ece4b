"""Iterative soft-thresholding for the l1 and the l1 + l2 (multi-penalty) problems.

The multi-penalty functional is

    T(u, v) = 0.5 * ||A(u + v) - y||^2 + alpha * ||u||_1 + 0.5 * beta * ||v||^2

and ``beta = inf`` forces ``v = 0`` (plain l1 regularization). Two routes are
provided: ISTA on the equivalent reduced single-penalty problem followed by a
closed-form ``v``, and alternating minimization (ISTA steps in ``u`` with ``v``
frozen, then an exact ``v`` update).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import IndexSet, as_matrix, check_beta, reduced_problem

STEP_FACTOR = 0.95
POWER_ITERS = 100
ZERO_TOL = 1e-10


class NonFiniteIterate(FloatingPointError):
    pass


@dataclass
class SolveResult:
    u: np.ndarray
    v: np.ndarray
    iterations: int
    objective_trace: list[float] = field(default_factory=list)
    optimality_residual: float = math.inf

    @property
    def objective(self) -> float:
        return self.objective_trace[-1] if self.objective_trace else math.nan


@dataclass(frozen=True)
class PenaltyParams:
    alpha: float
    beta: float = math.inf

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        check_beta(self.beta)


def soft_threshold(x, tau):
    """``sign(x) * max(|x| - tau, 0)``, componentwise."""
    if np.any(np.asarray(tau) < 0):
        raise ValueError("threshold must be nonnegative")
    out = np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def power_norm_sq(B, iters: int = POWER_ITERS, seed: int = 0) -> float:
    """Power-iteration estimate of ``||B||_2^2``, the Lipschitz constant of the gradient."""
    B = np.asarray(B, dtype=float)
    x = np.random.default_rng(seed).standard_normal(B.shape[1])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        z = B.T @ (B @ x)
        est = float(np.linalg.norm(z))
        if est == 0.0:
            return 0.0
        x = z / est
    return est


def _l1_residual(g, u, alpha):
    nz = u != 0
    on = np.abs(g[nz] + alpha * np.sign(u[nz]))
    off = np.maximum(np.abs(g[~nz]) - alpha, 0.0)
    return float(max(on.max(initial=0.0), off.max(initial=0.0)))


def optimality_residual(B, y, alpha: float, u) -> float:
    """Violation of ``B^T(Bu - y) in -alpha * sgn(u)`` in the max norm; zero iff u is optimal."""
    B = np.asarray(B, dtype=float)
    u = np.asarray(u, dtype=float)
    g = B.T @ (B @ u - np.asarray(y, dtype=float))
    return _l1_residual(g, u, alpha)


def l1_objective(B, y, alpha, u) -> float:
    r = B @ u - y
    return 0.5 * float(r @ r) + alpha * float(np.abs(u).sum())


def multi_objective(A, y, alpha, beta, u, v) -> float:
    """``T(u, v)``; infinite for ``beta = inf`` unless ``v = 0``."""
    if math.isinf(beta):
        return l1_objective(A, y, alpha, u) if not np.any(v) else math.inf
    r = A @ (u + v) - y
    return 0.5 * float(r @ r) + alpha * float(np.abs(u).sum()) + 0.5 * beta * float(v @ v)


def smooth_part(A, y, beta, u, v) -> float:
    r = A @ (u + v) - y
    return 0.5 * float(r @ r) + 0.5 * beta * float(v @ v)


def smooth_gradient(A, y, beta, u, v):
    """Gradient of the differentiable part of ``T`` with respect to ``(u, v)``."""
    g = A.T @ (A @ (u + v) - y)
    return g, g + beta * v


def ista_l1(B, y, alpha: float, max_iters: int = 10_000, tol: float = 1e-10, step: float | None = None) -> SolveResult:
    """Minimize ``0.5 ||Bu - y||^2 + alpha ||u||_1`` from ``u = 0``.

    Stops once the optimality residual drops to ``tol`` (``tol=0`` runs all
    ``max_iters`` steps).
    """
    B = as_matrix(B)
    y = np.asarray(y, dtype=float)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if step is None:
        L = power_norm_sq(B)
        step = STEP_FACTOR / L if L > 0 else 1.0

    u = np.zeros(B.shape[1])
    trace = []
    it = 0
    while True:
        r = B @ u - y
        g = B.T @ r
        trace.append(0.5 * float(r @ r) + alpha * float(np.abs(u).sum()))
        res = _l1_residual(g, u, alpha)
        if res <= tol or it >= max_iters:
            break
        u = soft_threshold(u - step * g, step * alpha)
        if not np.all(np.isfinite(u)):
            raise NonFiniteIterate(f"non-finite iterate at step {it}")
        it += 1
    return SolveResult(u, np.zeros_like(u), it, trace, res)


def _v_operator(A, beta):
    """Matrix ``M`` with ``v(u) = A^T M (y - Au)``, i.e. ``M = (beta + A A^T)^{-1}``."""
    m = A.shape[0]
    return np.linalg.inv(beta * np.eye(m) + A @ A.T)


def solve_multi_reduced(A, y, params: PenaltyParams, max_iters: int = 10_000, tol: float = 1e-10) -> SolveResult:
    """Multi-penalty minimizer via the reduced l1 problem and a closed-form ``v``."""
    A = as_matrix(A)
    y = np.asarray(y, dtype=float)
    if math.isinf(params.beta):
        return ista_l1(A, y, params.alpha, max_iters, tol)
    red = reduced_problem(A, y, params.beta)
    res = ista_l1(red.b_matrix, red.y_reduced, params.alpha, max_iters, tol)
    u = res.u
    v = A.T @ np.linalg.solve(params.beta * np.eye(A.shape[0]) + A @ A.T, y - A @ u)
    trace = [multi_objective(A, y, params.alpha, params.beta, np.zeros_like(u), np.zeros_like(u))]
    trace.append(multi_objective(A, y, params.alpha, params.beta, u, v))
    return SolveResult(u, v, res.iterations, trace, res.optimality_residual)


def solve_multi_alternating(
    A,
    y,
    params: PenaltyParams,
    outer_iters: int = 50,
    inner_iters: int = 50,
    tol: float | None = None,
    step: float | None = None,
) -> SolveResult:
    """Alternating minimization of ``T`` from ``u = v = 0``.

    Each outer iteration runs ``inner_iters`` soft-thresholding steps in ``u``
    with ``v`` frozen, then sets ``v`` to its exact minimizer. With ``tol`` set,
    stops early once the u-optimality residual (which, after the exact v update,
    is the residual of the reduced problem) reaches it.
    """
    A = as_matrix(A)
    y = np.asarray(y, dtype=float)
    alpha, beta = params.alpha, params.beta
    if math.isinf(beta):
        res = ista_l1(A, y, alpha, outer_iters * inner_iters, tol or 0.0, step)
        return res
    if step is None:
        step = STEP_FACTOR / power_norm_sq(A)
    M = _v_operator(A, beta)

    N = A.shape[1]
    u, v = np.zeros(N), np.zeros(N)
    trace = [multi_objective(A, y, alpha, beta, u, v)]
    res = math.inf
    it = 0
    for it in range(1, outer_iters + 1):
        Av = A @ v
        for _ in range(inner_iters):
            g = A.T @ (A @ u + Av - y)
            u = soft_threshold(u - step * g, step * alpha)
        v = A.T @ (M @ (y - A @ u))
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise NonFiniteIterate(f"non-finite iterate at outer step {it}")
        trace.append(multi_objective(A, y, alpha, beta, u, v))
        if tol is not None:
            res = _l1_residual(A.T @ (A @ (u + v) - y), u, alpha)
            if res <= tol:
                break
    if tol is None:
        res = _l1_residual(A.T @ (A @ (u + v) - y), u, alpha)
    return SolveResult(u, v, it, trace, res)


def solve(A, y, params: PenaltyParams, mode: str = "reduced", **kwargs) -> SolveResult:
    if mode == "reduced":
        return solve_multi_reduced(A, y, params, **kwargs)
    if mode == "alternating":
        return solve_multi_alternating(A, y, params, **kwargs)
    raise ValueError(f"unknown mode {mode!r}")


def support(u, zero_tol: float = ZERO_TOL) -> IndexSet:
    u = np.asarray(u, dtype=float)
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    return IndexSet(tuple(np.flatnonzero(np.abs(u) > zero_tol)), u.size)


# --- batched runs over parameter grids ----------------------------------------


def ista_l1_grid(A, y, alphas, iters: int, step: float | None = None) -> np.ndarray:
    """Fixed-iteration ISTA for every alpha at once; returns an (N, len(alphas)) array."""
    A = as_matrix(A)
    alphas = np.asarray(alphas, dtype=float)
    if step is None:
        step = STEP_FACTOR / power_norm_sq(A)
    Aty = A.T @ y
    AtA = A.T @ A
    U = np.zeros((A.shape[1], alphas.size))
    tau = step * alphas
    for _ in range(iters):
        U = soft_threshold(U - step * (AtA @ U - Aty[:, None]), tau)
    return U


def alternating_grid(A, y, alphas, betas, outer_iters: int = 50, inner_iters: int = 50, step: float | None = None) -> np.ndarray:
    """Alternating minimization for every (beta, alpha) pair at once.

    Returns u-components as an array of shape (len(betas), N, len(alphas)).
    Equivalent to calling ``solve_multi_alternating`` per pair.
    """
    A = as_matrix(A)
    y = np.asarray(y, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if step is None:
        step = STEP_FACTOR / power_norm_sq(A)
    m, N = A.shape
    AtA = A.T @ A
    Aty = A.T @ y
    AAt = A @ A.T
    M = np.linalg.inv(betas[:, None, None] * np.eye(m) + AAt)      # (nb, m, m)
    U = np.zeros((betas.size, N, alphas.size))
    V = np.zeros_like(U)
    tau = step * alphas
    for _ in range(outer_iters):
        shift = AtA @ V - Aty[:, None]
        for _ in range(inner_iters):
            U = soft_threshold(U - step * (AtA @ U + shift), tau)
        V = A.T @ (M @ (y[:, None] - A @ U))
    return U
