"""Multi-penalty (l1 + l2) regularization for sparse unmixing: solvers,
support-recovery certificates and Monte-Carlo studies."""

from .conditions import (
    Certificate,
    EnumerationTooLarge,
    RegionSummary,
    alpha_interval,
    cd_bound,
    certificate,
    condition_value,
    failure_fraction,
    region_summary,
    support_table,
    theta_max,
)
from .experiments import (
    EnsembleSpec,
    RecoveryStudy,
    SignalSpec,
    StatSummary,
    condition_failure_study,
    gaussian_matrix,
    geometric_grid,
    grid_search_recovery,
    region_study,
    sample_signal,
    summarize,
)
from .linalg import (
    IndexSet,
    ReducedProblem,
    SingularGram,
    gram_inverse_apply,
    inf_op_norm,
    reduced_problem,
    regularized_gram,
    regularized_operator,
    restrict_columns,
)
from .solvers import (
    NonFiniteIterate,
    PenaltyParams,
    SolveResult,
    ista_l1,
    optimality_residual,
    soft_threshold,
    solve_multi_alternating,
    solve,
    solve_multi_reduced,
    support,
)

__version__ = "0.1.0"
