"""Why the eigenvalue floor matters.

Soft-thresholding a noisy sample covariance gives sparsity but routinely
destroys positive definiteness when p is large relative to n. The
constrained estimator keeps the sparsity while staying on the right side
of the cone. This script builds one such example and compares the two.
"""

import numpy as np

from covadmm import (
    SolverConfig,
    min_eigenvalue,
    model1_cov,
    mvn_sample,
    objective,
    sample_covariance,
    soft_threshold_estimator,
    solve_with_state,
    standardize,
)

p, n, lam = 80, 25, 0.1
truth = model1_cov(p)
x = standardize(mvn_sample(n, truth, seed=11))
s_n = sample_covariance(x)

print(f"dimension p={p}, sample size n={n}, penalty {lam}")
print(f"sample covariance min eigenvalue: {min_eigenvalue(s_n):+.4f}")

soft = soft_threshold_estimator(s_n, lam)
eigs = np.linalg.eigvalsh(soft)
nnz = np.count_nonzero(soft[~np.eye(p, dtype=bool)])
print("\nplain soft-thresholding:")
print(f"  min eigenvalue   {eigs[0]:+.4f}  ({np.sum(eigs < 0)} negative)")
print(f"  off-diag nonzeros {nnz} of {p * (p - 1)}")
print(f"  objective        {objective(soft, s_n, lam).total:.4f}")

result, state = solve_with_state(s_n, SolverConfig(lam=lam))
eigs = np.linalg.eigvalsh(result.estimate)
# the sparse block carries the support; the returned feasible block
# additionally holds tolerance-level residue at the zero positions
support = np.count_nonzero(state.sigma[~np.eye(p, dtype=bool)])
print("\neigenvalue-floored estimator:")
print(f"  min eigenvalue   {eigs[0]:+.6f}  (floor 1e-4)")
print(f"  support size      {support} of {p * (p - 1)} off-diag entries")
print(f"  objective        {objective(result.estimate, s_n, lam).total:.4f}")
print(f"  iterations       {result.iterations} (shortcut: {result.shortcut_used})")
print(f"  KKT residual     {result.kkt_residual:.2e}")

gap = objective(result.estimate, s_n, lam).total - objective(soft, s_n, lam).total
print(f"\nthe constraint costs {gap:+.4f} in objective and buys back the cone.")
