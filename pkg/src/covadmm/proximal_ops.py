"""Off-diagonal soft-thresholding, the penalized objective, and the
augmented Lagrangian used as a solver diagnostic.

The penalty throughout is the l1 norm of the off-diagonal entries only;
diagonals are never shrunk. Entries shrunk to zero are stored as exact
0.0 so sparsity patterns can be read off with equality tests.
"""

from dataclasses import dataclass

import numpy as np

from .matrix_core import as_symmetric, frobenius_norm, offdiag_l1


@dataclass(frozen=True)
class Objective:
    """Penalized least-squares objective split into its two terms."""

    data_fit: float
    penalty: float
    total: float


def soft_threshold(z, tau: float) -> np.ndarray:
    """Shrink off-diagonal entries of ``z`` toward zero by ``tau``.

    Entries with magnitude at most ``tau`` become exact zeros; diagonal
    entries pass through unchanged. This is the proximal operator of
    ``tau`` times the off-diagonal l1 norm.
    """
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    m = as_symmetric(z)
    out = np.sign(m) * np.maximum(np.abs(m) - tau, 0.0)
    out += 0.0  # normalize -0.0 produced by sign()
    np.fill_diagonal(out, np.diag(m))
    return out


def soft_threshold_estimator(s_n, lam: float) -> np.ndarray:
    """Plain soft-thresholding covariance estimator.

    Exact minimizer of ``0.5 * ||Sigma - s_n||_F^2 + lam * |Sigma|_1``
    over all symmetric matrices (no positive-definiteness constraint).
    """
    return soft_threshold(s_n, lam)


def objective(sigma, s_n, lam: float) -> Objective:
    """Evaluate the penalized objective at ``sigma`` for data ``s_n``."""
    if lam < 0:
        raise ValueError(f"penalty must be nonnegative, got {lam}")
    sig = np.asarray(sigma, dtype=float)
    s = np.asarray(s_n, dtype=float)
    if sig.shape != s.shape:
        raise ValueError(f"dimension mismatch: {sig.shape} vs {s.shape}")
    data_fit = 0.5 * frobenius_norm(sig - s) ** 2
    penalty = lam * offdiag_l1(sig)
    return Objective(data_fit=data_fit, penalty=penalty, total=data_fit + penalty)


def augmented_lagrangian(theta, sigma, multiplier, s_n, lam: float, mu: float) -> float:
    """Augmented Lagrangian of the split problem at (theta, sigma, multiplier).

    Equals ``objective(sigma, s_n, lam).total`` minus the multiplier
    coupling ``<multiplier, theta - sigma>`` plus the quadratic penalty
    ``||theta - sigma||_F^2 / (2 mu)``.
    """
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    th = np.asarray(theta, dtype=float)
    sig = np.asarray(sigma, dtype=float)
    lm = np.asarray(multiplier, dtype=float)
    s = np.asarray(s_n, dtype=float)
    if not (th.shape == sig.shape == lm.shape == s.shape):
        raise ValueError("dimension mismatch among inputs")
    gap = th - sig
    value = objective(sig, s, lam).total
    value -= float(np.sum(lm * gap))
    value += float(np.sum(gap * gap)) / (2.0 * mu)
    return value
