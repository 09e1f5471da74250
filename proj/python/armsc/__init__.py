"""Arctangent rank minimization for robust subspace clustering."""

from ._core import (
    ARCTAN_CONVEXITY_PENALTY,
    DcConfig,
    ErrorModel,
    FormatError,
    NumericalError,
    SolveResult,
    SolverConfig,
    arctan_rank,
    block_diag_mass,
    build_affinity,
    cluster_subspaces,
    clustering_error,
    corrupt,
    generate_subspaces,
    load_labels,
    load_matrix,
    ncuts,
    objective_value,
    parse_error_model,
    prox_arctan_matrix,
    prox_arctan_vector,
    rank_approx_profile,
    save_matrix,
    shrink_l1,
    shrink_l21,
    solve_arm,
    solve_lrr,
    spectral_gradient,
    svt_nuclear,
)

__all__ = [name for name in dir() if not name.startswith("_")]
