import numpy as np
import pytest

from covadmm import (
    SolverConfig,
    metrics,
    min_eigenvalue,
    model1_cov,
    model2_cov,
    mvn_sample,
    run_experiment,
    sample_covariance,
    standardize,
)


class TestModel1:
    def test_entry_formula(self):
        truth = model1_cov(20).sigma0
        # indices here are 0-based; the banded kernel depends on |i - j|
        assert truth[0, 1] == 0.9
        assert truth[0, 10] == 0.0
        assert truth[3, 3] == 1.0
        assert truth[2, 7] == pytest.approx(0.5)

    def test_exact_decimal_entries(self):
        truth = model1_cov(15).sigma0
        for k in range(10):
            assert truth[0, k] == 1.0 - k / 10.0

    @pytest.mark.parametrize("p", [1, 5, 40, 100, 200])
    def test_positive_definite(self, p):
        truth = model1_cov(p)
        assert min_eigenvalue(truth.sigma0) > 0

    def test_active_set_size(self):
        p = 100
        truth = model1_cov(p)
        expected = 2 * sum(p - k for k in range(1, 10))
        assert truth.active_set_size == expected

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            model1_cov(0)


class TestModel2:
    def test_entry_formula(self):
        truth = model2_cov(40).sigma0
        assert truth[0, 0] == 1.0
        assert truth[0, 5] == 0.4  # same block
        assert truth[19, 24] == 0.4  # block-1 anchor into block 2
        assert truth[24, 19] == 0.4
        assert truth[4, 24] == 0.0  # non-anchor rows do not link

    def test_anchor_links_whole_next_block(self):
        truth = model2_cov(60).sigma0
        assert np.all(truth[19, 20:40] == 0.4)
        assert np.all(truth[39, 40:60] == 0.4)
        assert truth[19, 40] == 0.0  # no link two blocks ahead

    @pytest.mark.parametrize("p", [20, 40, 100, 200])
    def test_positive_definite(self, p):
        truth = model2_cov(p)
        assert min_eigenvalue(truth.sigma0) > 0

    def test_active_set_size(self):
        truth = model2_cov(40)
        within = 2 * 20 * 19  # two blocks of 20, ordered pairs
        links = 2 * 20  # one anchor row/column pair
        assert truth.active_set_size == within + links

    @pytest.mark.parametrize("p", [10, 30, 0, 21])
    def test_rejects_bad_dimension(self, p):
        with pytest.raises(ValueError):
            model2_cov(p)


class TestMvnSample:
    def test_shape_and_determinism(self):
        truth = model1_cov(5)
        a = mvn_sample(7, truth, seed=123)
        b = mvn_sample(7, truth, seed=123)
        assert a.shape == (7, 5)
        assert np.array_equal(a, b)

    def test_tiny_case_reproducible(self):
        truth = model1_cov(1)
        draws = mvn_sample(2, truth, seed=99)
        assert draws.shape == (2, 1)
        assert np.array_equal(draws, mvn_sample(2, truth, seed=99))

    def test_sample_moments_near_truth(self):
        truth = model1_cov(6)
        n = 4000
        x = mvn_sample(n, truth, seed=7)
        assert np.abs(x.mean(axis=0)).max() <= 4.0 / np.sqrt(n)
        s = sample_covariance(x)
        assert np.abs(s - truth.sigma0).max() <= 5.0 / np.sqrt(n)

    def test_needs_two_rows(self):
        with pytest.raises(ValueError):
            mvn_sample(1, model1_cov(3), seed=0)


class TestStandardize:
    def test_mean_zero_unit_variance(self):
        rng = np.random.default_rng(0)
        x = standardize(rng.standard_normal((50, 4)) * 3 + 1)
        assert np.abs(x.mean(axis=0)).max() <= 1e-12
        assert np.abs(x.std(axis=0, ddof=1) - 1).max() <= 1e-12

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        x = standardize(rng.standard_normal((30, 3)))
        again = standardize(x)
        assert np.abs(again - x).max() <= 1e-12

    def test_two_point_column(self):
        x = standardize(np.array([[0.0], [2.0]]))
        assert x[:, 0] == pytest.approx([-np.sqrt(0.5), np.sqrt(0.5)], abs=1e-15)

    def test_constant_column_named(self):
        x = np.column_stack([np.arange(5.0), np.full(5, 2.0)])
        with pytest.raises(ValueError, match="column 1"):
            standardize(x)


class TestSampleCovariance:
    def test_constant_rows_give_zero(self):
        x = np.tile([1.0, 2.0], (4, 1))
        assert np.array_equal(sample_covariance(x), np.zeros((2, 2)))

    def test_two_point_example(self):
        x = np.array([[1.0, 0.0], [-1.0, 0.0]])
        assert np.array_equal(sample_covariance(x), np.array([[1.0, 0.0], [0.0, 0.0]]))

    def test_divisor_is_n(self):
        rng = np.random.default_rng(3)
        x = standardize(rng.standard_normal((25, 4)))
        s = sample_covariance(x)
        assert np.diag(s) == pytest.approx(np.full(4, 24 / 25), abs=1e-12)

    def test_needs_two_rows(self):
        with pytest.raises(ValueError):
            sample_covariance(np.ones((1, 3)))


class TestMetrics:
    def test_perfect_estimate(self):
        truth = model1_cov(30)
        report = metrics(truth.sigma0, truth)
        assert report.frob_loss == 0.0
        assert report.spec_loss == 0.0
        assert report.fpr == 0.0
        assert report.tpr == 1.0
        assert report.is_pd
        assert report.n_neg_eigs == 0

    def test_identity_estimate_misses_everything(self):
        truth = model1_cov(100)
        report = metrics(np.eye(100), truth)
        assert report.tpr == 0.0
        assert report.fpr == 0.0

    def test_dense_estimate_hits_everything(self):
        truth = model2_cov(40)
        dense = np.full((40, 40), 0.4)
        np.fill_diagonal(dense, 1.0)
        report = metrics(dense, truth)
        assert report.fpr == 1.0
        assert report.tpr == 1.0

    def test_counts_negative_eigenvalues(self):
        truth = model1_cov(3)
        report = metrics(np.diag([1.0, -0.5, -0.1]), truth)
        assert report.n_neg_eigs == 2
        assert not report.is_pd

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            metrics(np.eye(3), model1_cov(4))


class TestRunExperiment:
    GRID = np.array([0.1, 0.3, 0.5, 0.7, 0.9])

    def run_small(self, replicates=2, workers=1, seed=42):
        return run_experiment(
            model=2,
            p=20,
            n=24,
            replicates=replicates,
            master_seed=seed,
            cfg=SolverConfig(lam=0.1),
            grid=self.GRID,
            folds=3,
            cv_repeats=1,
            workers=workers,
        )

    def test_summary_structure(self):
        summaries = self.run_small()
        assert set(summaries) == {"soft_threshold", "constrained"}
        cons = summaries["constrained"]
        assert cons.replicates == 2
        assert set(cons.means) >= {"frob_loss", "spec_loss", "fpr", "tpr", "n_neg_eigs"}
        assert cons.pd_count == 2
        assert cons.min_min_eig >= 1e-4 - 1e-8
        assert len(cons.seeds) == 2

    def test_single_replicate_has_null_errors(self):
        summaries = self.run_small(replicates=1)
        for summary in summaries.values():
            assert all(v is None for v in summary.standard_errors.values())

    def test_parallel_schedule_is_bit_reproducible(self):
        serial = self.run_small(workers=1)
        parallel = self.run_small(workers=2)
        assert serial == parallel

    def test_invalid_model_dimension(self):
        with pytest.raises((ValueError, RuntimeError)):
            run_experiment(
                model=2, p=30, n=20, replicates=1, master_seed=0, workers=1
            )

    def test_replicate_index_attached_to_errors(self):
        with pytest.raises(RuntimeError, match="replicate 0"):
            run_experiment(
                model=2,
                p=30,  # not a multiple of 20
                n=20,
                replicates=1,
                master_seed=0,
                workers=1,
            )
