"""Dense symmetric-matrix primitives: validation, eigendecomposition,
projection onto the eigenvalue-floored cone, and the norms used by the
estimators and their diagnostics.

All operations are pure functions on ndarrays and are safe to call
concurrently.
"""

from typing import NamedTuple

import numpy as np

# Constructors tolerate this much elementwise asymmetry (floating-point
# drift from I/O or BLAS) and repair it; anything larger is rejected.
SYMMETRY_TOL = 1e-8


class EigenDecomposition(NamedTuple):
    """Eigenvalues in descending order and matching orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray


def as_symmetric(a, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Validate and return a float64 symmetric copy of ``a``.

    Parameters
    ----------
    a : array_like
        Square matrix. Elementwise asymmetry up to ``tol`` is repaired
        via (A + A.T) / 2; larger asymmetry raises.

    Returns
    -------
    np.ndarray
        Symmetric p x p float64 array.

    Raises
    ------
    ValueError
        If ``a`` is not square, contains non-finite entries, or is
        asymmetric beyond ``tol``.
    """
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    gap = np.max(np.abs(m - m.T)) if m.size else 0.0
    if gap > tol:
        raise ValueError(
            f"matrix is asymmetric (max |a_ij - a_ji| = {gap:.3e} > {tol:.0e})"
        )
    return (m + m.T) / 2.0


def eigh(a) -> EigenDecomposition:
    """Symmetric eigendecomposition with eigenvalues sorted descending."""
    m = as_symmetric(a)
    values, vectors = np.linalg.eigh(m)
    return EigenDecomposition(values[::-1].copy(), vectors[:, ::-1].copy())


def project_to_cone(z, eps: float) -> np.ndarray:
    """Project ``z`` onto the cone of symmetric matrices with smallest
    eigenvalue at least ``eps``.

    Eigenvalues below ``eps`` are raised to ``eps`` and the matrix is
    recomposed in the same eigenbasis; the result is the Frobenius-nearest
    member of the cone.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    values, vectors = eigh(z)
    clipped = np.maximum(values, eps)
    out = (vectors * clipped) @ vectors.T
    return (out + out.T) / 2.0


def frobenius_norm(a) -> float:
    """Square root of the sum of squared entries."""
    m = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return float(np.linalg.norm(m))


def spectral_norm(a) -> float:
    """Largest absolute eigenvalue of a symmetric matrix."""
    values, _ = eigh(a)
    return float(np.max(np.abs(values)))


def offdiag_l1(a) -> float:
    """Sum of absolute values of the off-diagonal entries."""
    m = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return float(np.abs(m).sum() - np.abs(np.diag(m)).sum())


def min_eigenvalue(a) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    m = as_symmetric(a)
    return float(np.linalg.eigvalsh(m)[0])
