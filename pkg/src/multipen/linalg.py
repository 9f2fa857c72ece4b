"""Dense linear algebra for the multi-penalty problem.

Matrices are plain 2-D float ndarrays. The regularization weight ``beta`` is a
positive float; ``math.inf`` selects the single-penalty (pure l1) limit, in
which every beta-regularized operator collapses to ``A`` itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# Gram systems with a larger estimated condition number are treated as singular.
SINGULAR_COND = 1e12
# Eigenvalue floor used before forming inverse square roots.
EIG_FLOOR = 1e-15


class SingularGram(np.linalg.LinAlgError):
    """The restricted Gram system is numerically singular."""


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def check_beta(beta: float) -> float:
    beta = float(beta)
    if math.isnan(beta) or beta <= 0:
        raise ValueError(f"beta must be positive or inf, got {beta}")
    return beta


@dataclass(frozen=True)
class IndexSet:
    """Sorted, duplicate-free column indices into ``range(ambient)``."""

    indices: tuple[int, ...]
    ambient: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing: {idx}")
        if idx and (idx[0] < 0 or idx[-1] >= self.ambient):
            raise IndexError(f"indices {idx} out of range for ambient {self.ambient}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Iterable[int], ambient: int) -> "IndexSet":
        """Build from any iterable; sorts and rejects duplicates."""
        idx = sorted(int(i) for i in indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate indices in {idx}")
        return cls(tuple(idx), ambient)

    def complement(self) -> "IndexSet":
        taken = set(self.indices)
        return IndexSet(tuple(i for i in range(self.ambient) if i not in taken), self.ambient)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)


@dataclass(frozen=True)
class ReducedProblem:
    """Single-penalty data ``(B, y_reduced)`` equivalent to the multi-penalty problem."""

    b_matrix: np.ndarray
    y_reduced: np.ndarray


def inf_op_norm(M) -> float:
    """Induced l-infinity operator norm: the largest absolute row sum."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.abs(M).sum(axis=-1).max())


def restrict_columns(A, I: IndexSet) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if I.ambient != A.shape[1]:
        raise IndexError(f"index set ambient {I.ambient} != matrix columns {A.shape[1]}")
    return A[:, I.array()]


def regularized_operator(A, beta: float) -> np.ndarray:
    """Return ``(Id + A A^T / beta)^{-1} A``; ``A`` itself when beta is infinite."""
    A = as_matrix(A)
    beta = check_beta(beta)
    if math.isinf(beta):
        return A
    m = A.shape[0]
    K = np.eye(m) + A @ A.T / beta
    try:
        return np.linalg.solve(K, A)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"regularized operator solve failed for beta={beta}") from exc


def _inv_sqrt_factor(A, beta: float) -> np.ndarray:
    """Symmetric ``(Id + A A^T / beta)^{-1/2}`` via eigendecomposition."""
    lam, Q = np.linalg.eigh(A @ A.T / beta)
    lam = np.maximum(1.0 + lam, EIG_FLOOR)
    return (Q / np.sqrt(lam)) @ Q.T


def reduced_problem(A, y, beta: float) -> ReducedProblem:
    """Data ``(B_beta, y_beta)`` of the equivalent single-penalty l1 problem.

    The u-component of every multi-penalty minimizer minimizes
    ``0.5 * ||B u - y_beta||^2 + alpha * ||u||_1`` with
    ``B = (Id + A A^T/beta)^{-1/2} A`` and ``y_beta = (Id + A A^T/beta)^{-1/2} y``.
    """
    A = as_matrix(A)
    beta = check_beta(beta)
    y = np.asarray(y, dtype=float)
    if y.shape != (A.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({A.shape[0]},)")
    if math.isinf(beta):
        raise ValueError("reduced problem needs a finite beta")
    F = _inv_sqrt_factor(A, beta)
    return ReducedProblem(F @ A, F @ y)


def regularized_gram(A, beta: float) -> np.ndarray:
    """Full N x N matrix ``A_beta^T A``, symmetrized.

    Every restricted quantity in the recovery conditions is a sub-block of it:
    ``A_{beta,J}^T A_I = G[J][:, I]``.
    """
    A = as_matrix(A)
    G = regularized_operator(A, beta).T @ A
    return 0.5 * (G + G.T)


def gram_inverse_apply(A, beta: float, I: IndexSet, rhs) -> np.ndarray:
    """Solve ``(A_{beta,I}^T A_I) X = rhs`` by LU; raise SingularGram if ill-conditioned."""
    A = as_matrix(A)
    AI = restrict_columns(A, I)
    AbI = restrict_columns(regularized_operator(A, beta), I)
    gram = AbI.T @ AI
    rhs = np.asarray(rhs, dtype=float)
    if len(I) == 0:
        return rhs
    if len(I) > A.shape[0] or np.linalg.cond(gram) > SINGULAR_COND:
        raise SingularGram(f"Gram system on support {I.indices} is singular")
    return np.linalg.solve(gram, rhs)
