"""Positive definite sparse covariance estimation.

A library for the eigenvalue-floored l1-penalized covariance estimator:
an alternating direction solver with closed-form updates, penalty-path
and cross-validation machinery, and a simulation lab for replicated
benchmark experiments.
"""

from .admm_solver import (
    AdmmState,
    Diagnostics,
    EstimationResult,
    OracleError,
    SolverConfig,
    g_norm_sq,
    init_state,
    kkt_residuals,
    lambda_step,
    reference_solve,
    sigma_step,
    solve,
    solve_with_state,
    theta_step,
)
from .matrix_core import (
    EigenDecomposition,
    as_symmetric,
    eigh,
    frobenius_norm,
    min_eigenvalue,
    offdiag_l1,
    project_to_cone,
    spectral_norm,
)
from .model_selection import (
    CvReport,
    PathEntry,
    PathResult,
    cv_select_lambda,
    default_grid,
    fold_indices,
    solution_path,
    validate_grid,
)
from .proximal_ops import (
    Objective,
    augmented_lagrangian,
    objective,
    soft_threshold,
    soft_threshold_estimator,
)
from .simulation import (
    ExperimentSummary,
    GroundTruth,
    MetricsReport,
    metrics,
    model1_cov,
    model2_cov,
    mvn_sample,
    run_experiment,
    sample_covariance,
    standardize,
)

__version__ = "0.1.0"

__all__ = [
    "AdmmState",
    "CvReport",
    "Diagnostics",
    "EigenDecomposition",
    "EstimationResult",
    "ExperimentSummary",
    "GroundTruth",
    "MetricsReport",
    "Objective",
    "OracleError",
    "PathEntry",
    "PathResult",
    "SolverConfig",
    "as_symmetric",
    "augmented_lagrangian",
    "cv_select_lambda",
    "default_grid",
    "eigh",
    "fold_indices",
    "frobenius_norm",
    "g_norm_sq",
    "init_state",
    "kkt_residuals",
    "lambda_step",
    "metrics",
    "min_eigenvalue",
    "model1_cov",
    "model2_cov",
    "mvn_sample",
    "objective",
    "offdiag_l1",
    "project_to_cone",
    "reference_solve",
    "run_experiment",
    "sample_covariance",
    "sigma_step",
    "soft_threshold",
    "soft_threshold_estimator",
    "solution_path",
    "solve",
    "solve_with_state",
    "spectral_norm",
    "standardize",
    "theta_step",
    "validate_grid",
]
