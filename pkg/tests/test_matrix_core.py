import numpy as np
import pytest

from covadmm import (
    as_symmetric,
    eigh,
    frobenius_norm,
    min_eigenvalue,
    offdiag_l1,
    project_to_cone,
    spectral_norm,
)
from conftest import random_symmetric

HAND_2X2 = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3 and -1


class TestAsSymmetric:
    def test_repairs_small_drift(self):
        a = np.array([[1.0, 0.5 + 5e-9], [0.5, 1.0]])
        m = as_symmetric(a)
        assert np.array_equal(m, m.T)

    def test_rejects_large_asymmetry(self):
        with pytest.raises(ValueError, match="asymmetric"):
            as_symmetric(np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            as_symmetric(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            as_symmetric(np.zeros((2, 3)))


class TestEigh:
    def test_identity(self):
        dec = eigh(np.eye(3))
        assert np.allclose(dec.values, [1.0, 1.0, 1.0])

    def test_diagonal(self):
        dec = eigh(np.diag([2.0, -1.0]))
        assert np.allclose(dec.values, [2.0, -1.0])

    def test_hand_2x2(self):
        dec = eigh(HAND_2X2)
        assert np.allclose(dec.values, [3.0, -1.0], atol=1e-12)
        v = np.array([1.0, 1.0]) / np.sqrt(2)
        assert min(
            np.abs(dec.vectors[:, 0] - v).max(), np.abs(dec.vectors[:, 0] + v).max()
        ) < 1e-12

    def test_values_descending(self, rng):
        dec = eigh(random_symmetric(rng, 12))
        assert np.all(np.diff(dec.values) <= 0)

    @pytest.mark.parametrize("p", [3, 17, 64, 200])
    def test_reconstruction_and_orthonormality(self, rng, p):
        a = random_symmetric(rng, p)
        values, vectors = eigh(a)
        recon = (vectors * values) @ vectors.T
        assert frobenius_norm(recon - a) <= 1e-10 * max(1.0, frobenius_norm(a))
        gram = vectors.T @ vectors
        assert frobenius_norm(gram - np.eye(p)) <= 1e-10 * p

    def test_deterministic(self, rng):
        a = random_symmetric(rng, 9)
        d1 = eigh(a)
        d2 = eigh(a)
        assert np.array_equal(d1.values, d2.values)
        assert np.array_equal(d1.vectors, d2.vectors)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            eigh(np.array([[np.inf, 0.0], [0.0, 1.0]]))


class TestProjectToCone:
    def test_already_feasible(self):
        assert np.allclose(project_to_cone(np.eye(3), 1e-4), np.eye(3), atol=1e-12)

    def test_clamps_negative_eigenvalue(self):
        out = project_to_cone(np.diag([2.0, -1.0]), 0.0)
        assert np.allclose(out, np.diag([2.0, 0.0]), atol=1e-12)

    def test_hand_2x2(self):
        out = project_to_cone(HAND_2X2, 0.0)
        assert np.allclose(out, np.full((2, 2), 1.5), atol=1e-12)

    def test_floor_respected(self, rng):
        for _ in range(10):
            z = random_symmetric(rng, 6)
            out = project_to_cone(z, 1e-4)
            assert min_eigenvalue(out) >= 1e-4 - 1e-9

    def test_idempotent(self, rng):
        for _ in range(10):
            z = random_symmetric(rng, 5)
            once = project_to_cone(z, 1e-3)
            twice = project_to_cone(once, 1e-3)
            assert np.abs(twice - once).max() <= 1e-9

    def test_projection_is_nearest_feasible_point(self, rng):
        # brute-force oracle: no sampled feasible matrix is closer
        eps = 1e-3
        z = random_symmetric(rng, 3)
        proj = project_to_cone(z, eps)
        best = frobenius_norm(z - proj)
        for _ in range(1000):
            candidate = project_to_cone(random_symmetric(rng, 3, scale=2.0), eps)
            assert best <= frobenius_norm(z - candidate) + 1e-12

    def test_negative_eps_rejected(self):
        with pytest.raises(ValueError):
            project_to_cone(np.eye(2), -1e-3)


class TestNorms:
    def test_frobenius_examples(self):
        assert frobenius_norm(np.zeros((4, 4))) == 0.0
        assert frobenius_norm(np.eye(3)) == pytest.approx(np.sqrt(3), abs=1e-15)
        assert frobenius_norm(np.array([[3.0, 4.0], [4.0, 3.0]])) == pytest.approx(
            np.sqrt(50), abs=1e-12
        )

    def test_spectral_examples(self):
        assert spectral_norm(np.eye(5)) == pytest.approx(1.0, abs=1e-12)
        assert spectral_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0, abs=1e-12)
        assert spectral_norm(HAND_2X2) == pytest.approx(3.0, abs=1e-12)

    def test_offdiag_l1_examples(self):
        assert offdiag_l1(np.eye(3)) == 0.0
        assert offdiag_l1(np.array([[1.0, 0.5], [0.5, 1.0]])) == pytest.approx(1.0)
        assert offdiag_l1(np.zeros((2, 2))) == 0.0

    def test_min_eigenvalue_examples(self):
        assert min_eigenvalue(np.eye(2)) == pytest.approx(1.0, abs=1e-12)
        assert min_eigenvalue(np.diag([5.0, -2.0, 0.0])) == pytest.approx(-2.0, abs=1e-12)
        assert min_eigenvalue(HAND_2X2) == pytest.approx(-1.0, abs=1e-12)

    def test_spectral_below_frobenius(self, rng):
        for _ in range(25):
            a = random_symmetric(rng, int(rng.integers(2, 9)))
            assert spectral_norm(a) <= frobenius_norm(a) + 1e-12
