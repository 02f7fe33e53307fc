"""Penalty-grid solution paths with warm starts and k-fold
cross-validation for choosing the sparsity penalty.

Paths are computed from the largest penalty down: large penalties are
sparse, usually satisfy the eigenvalue floor outright, and each solve
seeds the next one, so the whole sweep costs little more than its few
hardest values.
"""

import time
from dataclasses import dataclass

import numpy as np

from .admm_solver import EstimationResult, SolverConfig, solve_with_state
from .proximal_ops import objective, soft_threshold_estimator


def default_grid() -> np.ndarray:
    """The standard 99-point penalty grid 0.01, 0.02, ..., 0.99."""
    return np.arange(1, 100) / 100.0


def validate_grid(values) -> np.ndarray:
    """Check that grid values are finite, positive and strictly increasing."""
    grid = np.asarray(values, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("penalty grid is empty")
    if not np.all(np.isfinite(grid)):
        raise ValueError("penalty grid contains non-finite values")
    if np.any(grid <= 0):
        raise ValueError("penalty grid values must be positive")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("penalty grid must be strictly increasing")
    return grid


@dataclass
class PathEntry:
    lam: float
    result: EstimationResult
    objective: float
    nnz_offdiag: int
    min_eig: float
    seconds: float


@dataclass
class PathResult:
    entries: list
    total_time: float


def _nnz_offdiag(estimate: np.ndarray) -> int:
    off = estimate[~np.eye(estimate.shape[0], dtype=bool)]
    return int(np.count_nonzero(off))


def solution_path(s_n, grid, cfg: SolverConfig) -> PathResult:
    """Solve for every penalty value on the grid, reusing iterates.

    Values are processed in descending order with each solve warm-started
    from the previous terminal iterate; entries are returned in grid
    (ascending) order. A solve that hits the iteration cap is recorded
    with ``converged=False`` and the path continues.

    Parameters
    ----------
    s_n : array_like
        Symmetric input matrix shared by all solves.
    grid : array_like
        Strictly increasing positive penalty values.
    cfg : SolverConfig
        Template configuration; its ``lam`` is ignored in favor of the
        grid values.
    """
    grid = validate_grid(grid)
    t_start = time.perf_counter()
    entries = []
    state = None
    for lam in grid[::-1]:
        t0 = time.perf_counter()
        cfg_lam = SolverConfig(
            lam=float(lam),
            eps=cfg.eps,
            mu=cfg.mu,
            tol_primal=cfg.tol_primal,
            tol_dual=cfg.tol_dual,
            max_iter=cfg.max_iter,
        )
        result, state = solve_with_state(s_n, cfg_lam, warm_start=state)
        # sparsity is read off the sparse block: the returned theta block
        # carries tolerance-level residue at the pattern's zero entries
        pattern = result.estimate if state is None else state.sigma
        entries.append(
            PathEntry(
                lam=float(lam),
                result=result,
                objective=objective(result.estimate, s_n, float(lam)).total,
                nnz_offdiag=_nnz_offdiag(pattern),
                min_eig=result.min_eig,
                seconds=time.perf_counter() - t0,
            )
        )
    entries.reverse()
    return PathResult(entries=entries, total_time=time.perf_counter() - t_start)


@dataclass
class CvReport:
    """Outcome of a cross-validated penalty search."""

    fold_count: int
    cv_losses: np.ndarray
    selected_lambda: float
    seed: int


def fold_indices(n: int, folds: int, seed: int, repeat: int = 0) -> list:
    """Deterministic fold partition: seeded shuffle, then contiguous split.

    The shuffle generator is ``default_rng(SeedSequence(seed,
    spawn_key=(repeat,)))`` so that repeated partitions of the same data
    are independent but reproducible. Fold sizes are balanced within one
    row.
    """
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    if n // folds < 2:
        raise ValueError(
            f"every fold needs at least 2 rows: n={n} cannot support {folds} folds"
        )
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(repeat,)))
    return np.array_split(rng.permutation(n), folds)


def _fold_covariance(x: np.ndarray, ddof: int = 0) -> np.ndarray:
    centered = x - x.mean(axis=0)
    s = centered.T @ centered / (x.shape[0] - ddof)
    return (s + s.T) / 2.0


def _path_estimates(s_tr: np.ndarray, grid_desc: np.ndarray, cfg: SolverConfig, estimator: str):
    """Yield (lam, estimate) over a descending grid, warm-starting solves."""
    state = None
    for lam in grid_desc:
        lam = float(lam)
        if estimator == "soft":
            yield lam, soft_threshold_estimator(s_tr, lam)
        else:
            cfg_lam = SolverConfig(
                lam=lam,
                eps=cfg.eps,
                mu=cfg.mu,
                tol_primal=cfg.tol_primal,
                tol_dual=cfg.tol_dual,
                max_iter=cfg.max_iter,
            )
            result, state = solve_with_state(s_tr, cfg_lam, warm_start=state, light=True)
            yield lam, result.estimate


def cv_select_lambda(
    x,
    grid,
    folds: int,
    cfg: SolverConfig,
    seed: int,
    estimator: str = "constrained",
    repeats: int = 1,
    validation_ddof: int = 1,
) -> CvReport:
    """Choose the penalty by k-fold cross-validation on the data rows.

    For each fold, the estimator is fit on the sample covariance of the
    out-of-fold rows at every grid value and scored by the squared
    Frobenius distance to the held-out fold's sample covariance.
    ``cv_losses`` is the mean over all scored (fold, partition) pairs and
    ``selected_lambda`` its minimizer, with ties broken toward the
    largest (sparsest) penalty.

    Training covariances use the estimator's native divisor-n
    convention; the validation target defaults to the unbiased divisor
    (``validation_ddof=1``) so that its expectation is the population
    matrix. A biased target systematically rewards over-shrinkage,
    because held-out folds are small and divisor-n scales them down by
    (m - 1) / m.

    Parameters
    ----------
    x : array_like
        Data matrix, rows are observations.
    grid : array_like
        Strictly increasing positive penalty values.
    folds : int
        Number of folds; every fold needs at least two rows.
    cfg : SolverConfig
        Solver settings for the constrained fits.
    seed : int
        Drives the fold shuffles only.
    estimator : {"constrained", "soft"}
        Which estimator to tune.
    repeats : int
        Number of independent fold partitions to average over; more
        repeats stabilize the selection at proportional cost.
    validation_ddof : int
        Delta degrees of freedom for held-out covariances (0 or 1).
    """
    data = np.asarray(x, dtype=float)
    if data.ndim != 2:
        raise ValueError(f"expected a 2-d data matrix, got shape {data.shape}")
    if estimator not in ("constrained", "soft"):
        raise ValueError(f"unknown estimator {estimator!r}")
    if repeats < 1:
        raise ValueError(f"repeats must be positive, got {repeats}")
    if validation_ddof not in (0, 1):
        raise ValueError(f"validation_ddof must be 0 or 1, got {validation_ddof}")
    grid = validate_grid(grid)
    grid_desc = grid[::-1]
    n = data.shape[0]

    losses_desc = np.zeros(grid.size)
    for repeat in range(repeats):
        for held_out in fold_indices(n, folds, seed, repeat):
            mask = np.ones(n, dtype=bool)
            mask[held_out] = False
            s_tr = _fold_covariance(data[mask])
            s_va = _fold_covariance(data[held_out], ddof=validation_ddof)
            for i, (_, estimate) in enumerate(
                _path_estimates(s_tr, grid_desc, cfg, estimator)
            ):
                diff = estimate - s_va
                losses_desc[i] += float(np.sum(diff * diff))
    losses_desc /= folds * repeats

    cv_losses = losses_desc[::-1].copy()
    best = np.min(cv_losses)
    selected = float(np.max(grid[cv_losses == best]))
    return CvReport(
        fold_count=folds,
        cv_losses=cv_losses,
        selected_lambda=selected,
        seed=seed,
    )
