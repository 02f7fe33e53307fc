"""Command-line front end.

Subcommands: ``estimate`` fits one matrix from a CSV of observations,
``path`` sweeps a penalty grid, ``simulate`` runs the replicated
benchmark experiments. Matrices are written as full CSV with 17
significant digits (lossless float round trip); reports are JSON with
sorted keys.

Exit codes: 0 success, 2 usage or input error, 3 non-convergence.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from .admm_solver import SolverConfig, solve
from .matrix_core import as_symmetric
from .model_selection import cv_select_lambda, default_grid, solution_path, validate_grid
from .simulation import run_experiment, sample_covariance, standardize

SCHEMA_VERSION = "1"
EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3


# ---------------------------------------------------------------------------
# file I/O

def read_data_csv(path: str) -> np.ndarray:
    """Read an observations-by-variables CSV, tolerating one header row.

    Raises ValueError naming the offending row (1-based, counting the
    header) for ragged rows or non-numeric cells.
    """
    rows = []
    with open(path, newline="") as handle:
        raw = [line.rstrip("\n\r") for line in handle]
    cells = [line.split(",") for line in raw if line.strip() != ""]
    if not cells:
        raise ValueError(f"{path}: no data rows")

    start = 0
    if not all(_is_number(c) for c in cells[0]):
        start = 1
        if len(cells) == 1:
            raise ValueError(f"{path}: no data rows below the header")

    width = len(cells[start])
    for offset, row in enumerate(cells[start:], start=start + 1):
        if len(row) != width:
            raise ValueError(
                f"{path}: row {offset} has {len(row)} columns, expected {width}"
            )
        for cell in row:
            if not _is_number(cell):
                raise ValueError(f"{path}: row {offset}: non-numeric cell {cell!r}")
        rows.append([float(c) for c in row])
    return np.asarray(rows, dtype=float)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def read_covariance_csv(path: str) -> np.ndarray:
    """Read a p x p symmetric matrix; asymmetry beyond 1e-8 is rejected."""
    matrix = read_data_csv(path)
    return as_symmetric(matrix)


def write_matrix_csv(path: str, matrix: np.ndarray) -> None:
    with open(path, "w") as handle:
        for row in matrix:
            handle.write(",".join(format(v, ".17g") for v in row))
            handle.write("\n")


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _ensure_parent(prefix: str) -> None:
    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)


# ---------------------------------------------------------------------------
# shared pieces

def parse_grid(spec: str) -> np.ndarray:
    """Parse a "start:step:end" penalty grid (endpoints inclusive)."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:step:end, got {spec!r}")
    try:
        start, step, end = (float(x) for x in parts)
    except ValueError:
        raise ValueError(f"grid must be numeric start:step:end, got {spec!r}")
    if step <= 0 or start <= 0 or end < start:
        raise ValueError(f"grid needs start > 0, step > 0, end >= start, got {spec!r}")
    count = int((end - start) / step + 1e-9) + 1
    values = np.round(start + step * np.arange(count), 12)
    return validate_grid(values)


def to_correlation(s: np.ndarray) -> np.ndarray:
    scales = np.sqrt(np.diag(s))
    if np.any(scales == 0):
        raise ValueError("zero variance on the diagonal, cannot rescale to correlation")
    corr = s / np.outer(scales, scales)
    np.fill_diagonal(corr, 1.0)
    return (corr + corr.T) / 2.0


def _solver_config(args, lam: float) -> SolverConfig:
    return SolverConfig(
        lam=lam,
        eps=args.eps,
        mu=args.mu,
        tol_primal=args.tol,
        tol_dual=args.tol,
        max_iter=args.max_iter,
    )


def _add_solver_flags(parser) -> None:
    parser.add_argument("--eps", type=float, default=1e-4, help="eigenvalue floor (default 1e-4)")
    parser.add_argument("--mu", type=float, default=2.0, help="coupling parameter (default 2)")
    parser.add_argument(
        "--tol", type=float, default=1e-7,
        help="primal and dual residual tolerance, relative (default 1e-7)",
    )
    parser.add_argument("--max-iter", type=int, default=20000, help="iteration cap (default 20000)")
    parser.add_argument("--output", default="covadmm_out", help="output file prefix")


def _add_data_flags(parser) -> None:
    parser.add_argument(
        "--standardize",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="center and scale columns before estimating (default on)",
    )
    parser.add_argument(
        "--scale", choices=("cov", "corr"), default="corr",
        help="estimate the covariance or the correlation matrix (default corr)",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for fold shuffles")


def _prepare_input(args) -> tuple:
    """Load observations, apply the scale conventions, and return
    (data_for_cv, matrix_to_estimate)."""
    data = read_data_csv(args.input)
    if data.shape[0] < 2:
        raise ValueError(f"{args.input}: need at least 2 observation rows")
    processed = standardize(data) if args.standardize else data
    s_n = sample_covariance(processed)
    if args.scale == "corr":
        s_n = to_correlation(s_n)
        # fold covariances should live on the same scale as the estimate
        cv_data = standardize(data)
    else:
        cv_data = processed
    return cv_data, s_n


def _nnz_offdiag(matrix: np.ndarray) -> int:
    off = matrix[~np.eye(matrix.shape[0], dtype=bool)]
    return int(np.count_nonzero(off))


def _base_report(args, argv_echo) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": argv_echo,
        "config": {
            "eps": args.eps,
            "mu": args.mu,
            "tol": args.tol,
            "max_iter": args.max_iter,
        },
    }


# ---------------------------------------------------------------------------
# subcommands

def cmd_estimate(args, argv_echo) -> int:
    timings = {}
    t0 = time.perf_counter()
    cv_data, s_n = _prepare_input(args)
    timings["read"] = time.perf_counter() - t0

    selected = None
    if args.cv:
        t0 = time.perf_counter()
        report = cv_select_lambda(
            cv_data,
            default_grid(),
            args.folds,
            _solver_config(args, 0.1),
            args.seed,
            estimator="constrained",
            repeats=args.cv_repeats,
        )
        selected = report.selected_lambda
        lam = selected
        timings["cv"] = time.perf_counter() - t0
    else:
        lam = args.lam

    t0 = time.perf_counter()
    result = solve(s_n, _solver_config(args, lam))
    timings["solve"] = time.perf_counter() - t0

    _ensure_parent(args.output)
    estimate_path = f"{args.output}.estimate.csv"
    report_path = f"{args.output}.report.json"
    t0 = time.perf_counter()
    write_matrix_csv(estimate_path, result.estimate)
    payload = _base_report(args, argv_echo)
    payload["result"] = {
        "lambda": lam,
        "selected_lambda": selected,
        "converged": result.converged,
        "iterations": result.iterations,
        "shortcut_used": result.shortcut_used,
        "kkt_residual": result.kkt_residual,
        "min_eig": result.min_eig,
        "nnz_offdiag": _nnz_offdiag(result.estimate),
        "dim": int(s_n.shape[0]),
    }
    payload["outputs"] = [estimate_path, report_path]
    timings["write"] = time.perf_counter() - t0
    payload["timings"] = timings
    write_json(report_path, payload)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def cmd_path(args, argv_echo) -> int:
    timings = {}
    t0 = time.perf_counter()
    if args.covariance is not None:
        s_n = read_covariance_csv(args.covariance)
    else:
        _, s_n = _prepare_input(args)
    timings["read"] = time.perf_counter() - t0

    grid = parse_grid(args.grid)
    result = solution_path(s_n, grid, _solver_config(args, 0.1))
    timings["path"] = result.total_time

    _ensure_parent(args.output)
    path_csv = f"{args.output}.path.csv"
    report_path = f"{args.output}.report.json"
    with open(path_csv, "w") as handle:
        handle.write("lambda,objective,nnz_offdiag,min_eig,iterations,shortcut,seconds\n")
        for entry in result.entries:
            handle.write(
                "%s,%s,%d,%s,%d,%d,%s\n"
                % (
                    format(entry.lam, ".17g"),
                    format(entry.objective, ".17g"),
                    entry.nnz_offdiag,
                    format(entry.min_eig, ".17g"),
                    entry.result.iterations,
                    int(entry.result.shortcut_used),
                    format(entry.seconds, ".6g"),
                )
            )

    non_converged = sum(not e.result.converged for e in result.entries)
    payload = _base_report(args, argv_echo)
    payload["result"] = {
        "grid_size": len(result.entries),
        "non_converged": non_converged,
        "shortcut_count": sum(e.result.shortcut_used for e in result.entries),
        "total_seconds": result.total_time,
        "dim": int(s_n.shape[0]),
    }
    payload["outputs"] = [path_csv, report_path]
    payload["timings"] = timings
    write_json(report_path, payload)
    return EXIT_NO_CONVERGENCE if non_converged else EXIT_OK


def _summary_payload(name, summary) -> dict:
    return {
        "estimator": name,
        "replicates": summary.replicates,
        "pd_count": summary.pd_count,
        "means": summary.means,
        "standard_errors": summary.standard_errors,
        "min_min_eig": summary.min_min_eig,
        "non_converged": summary.non_converged,
    }


def cmd_simulate(args, argv_echo) -> int:
    grid = parse_grid(args.grid)
    t0 = time.perf_counter()
    summaries = run_experiment(
        model=args.model,
        p=args.p,
        n=args.n,
        replicates=args.replicates,
        master_seed=args.seed,
        cfg=_solver_config(args, 0.1),
        grid=grid,
        folds=args.folds,
        cv_repeats=args.cv_repeats,
        workers=None if args.workers == 0 else args.workers,
    )
    elapsed = time.perf_counter() - t0

    _ensure_parent(args.output)
    summary_path = f"{args.output}.summary.json"
    report_path = f"{args.output}.report.json"

    summary = {
        "schema_version": SCHEMA_VERSION,
        "experiment": {
            "model": args.model,
            "p": args.p,
            "n": args.n,
            "replicates": args.replicates,
            "master_seed": args.seed,
            "folds": args.folds,
            "cv_repeats": args.cv_repeats,
            "grid": [float(v) for v in grid],
        },
        "estimators": {
            name: _summary_payload(name, s) for name, s in summaries.items()
        },
    }
    write_json(summary_path, summary)

    payload = _base_report(args, argv_echo)
    payload["result"] = {
        "pd_counts": {name: s.pd_count for name, s in summaries.items()},
        "non_converged": {name: s.non_converged for name, s in summaries.items()},
    }
    payload["outputs"] = [summary_path, report_path]
    payload["timings"] = {"total": elapsed}
    write_json(report_path, payload)

    any_non_converged = any(s.non_converged for s in summaries.values())
    return EXIT_NO_CONVERGENCE if any_non_converged else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covadmm",
        description="Positive definite sparse covariance estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="fit one estimate from a CSV of observations")
    est.add_argument("--input", required=True, help="CSV of observations (rows) by variables")
    pick = est.add_mutually_exclusive_group(required=True)
    pick.add_argument("--lambda", dest="lam", type=float, help="penalty value")
    pick.add_argument("--cv", action="store_true", help="choose the penalty by cross-validation")
    est.add_argument("--folds", type=int, default=5, help="cross-validation folds (default 5)")
    est.add_argument(
        "--cv-repeats", type=int, default=3,
        help="fold partitions averaged during cross-validation (default 3)",
    )
    _add_data_flags(est)
    _add_solver_flags(est)
    est.set_defaults(func=cmd_estimate)

    path = sub.add_parser("path", help="sweep a penalty grid")
    source = path.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="CSV of observations (rows) by variables")
    source.add_argument("--covariance", help="CSV of a p x p symmetric matrix")
    path.add_argument(
        "--grid", default="0.01:0.01:0.99",
        help="penalty grid as start:step:end (default 0.01:0.01:0.99)",
    )
    _add_data_flags(path)
    _add_solver_flags(path)
    path.set_defaults(func=cmd_path)

    sim = sub.add_parser("simulate", help="run a replicated benchmark experiment")
    sim.add_argument("--model", type=int, choices=(1, 2), required=True)
    sim.add_argument("--p", type=int, required=True, help="dimension")
    sim.add_argument("--n", type=int, default=50, help="rows per replicate (default 50)")
    sim.add_argument("--replicates", type=int, default=100)
    sim.add_argument("--seed", type=int, default=0, help="master seed")
    sim.add_argument("--folds", type=int, default=5)
    sim.add_argument("--cv-repeats", type=int, default=3)
    sim.add_argument(
        "--grid", default="0.01:0.01:0.99",
        help="penalty grid as start:step:end (default 0.01:0.01:0.99)",
    )
    sim.add_argument(
        "--workers", type=int, default=0,
        help="worker processes; 0 = COVADMM_THREADS or CPU count",
    )
    _add_solver_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, ["covadmm", *argv])
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # malformed input must never crash the CLI
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
