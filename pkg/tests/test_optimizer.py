import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gdm import (
    GdmConfig,
    InvalidParameterError,
    ObjectiveParams,
    SyntheticSpec,
    descend,
    gdm,
    genetic_refine,
    global_dimension_hard,
    greedy_merge_init,
    indicator_membership,
    misclassification_rate,
    project_columns,
    project_simplex,
    sample_subspace_mixture,
    threshold,
    validate_membership,
)
from gdm.optimizer import _descend_loop

from oracles import project_simplex_qp

PARAMS = ObjectiveParams()


def two_separated_lines(n_per=5, seed=0):
    rng = np.random.default_rng(seed)
    a = np.zeros((9, 2 * n_per))
    a[0, :n_per] = rng.uniform(1.0, 2.0, n_per)
    a[1, n_per:] = rng.uniform(1.0, 2.0, n_per)
    return a


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        GdmConfig(n_clusters=0)
    with pytest.raises(InvalidParameterError):
        GdmConfig(n_clusters=2, restarts=-1)
    with pytest.raises(InvalidParameterError):
        GdmConfig(n_clusters=2, step_target=0.0)
    with pytest.raises(InvalidParameterError):
        GdmConfig(n_clusters=2, eps=1.0)


class TestProjectSimplex:
    def test_fixed_points_and_symmetry(self):
        np.testing.assert_array_equal(project_simplex([1.0, 0.0, 0.0]), [1, 0, 0])
        np.testing.assert_allclose(
            project_simplex([0.5, 0.5, 0.5]), [1 / 3, 1 / 3, 1 / 3], atol=1e-15
        )
        np.testing.assert_allclose(project_simplex([2.0, 0.0, 0.0]), [1, 0, 0])

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            v = rng.normal(scale=3.0, size=rng.integers(1, 8))
            w = project_simplex(v)
            np.testing.assert_allclose(project_simplex(w), w, atol=1e-12)

    def test_matches_qp_oracle_seeded(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            v = rng.normal(scale=2.0, size=rng.integers(2, 7))
            np.testing.assert_allclose(
                project_simplex(v), project_simplex_qp(v), atol=1e-8
            )

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=-50, max_value=50, allow_nan=False),
            min_size=1,
            max_size=6,
        )
    )
    def test_matches_qp_oracle_property(self, values):
        v = np.array(values)
        np.testing.assert_allclose(project_simplex(v), project_simplex_qp(v), atol=1e-8)

    def test_columnwise_projection_matches(self):
        rng = np.random.default_rng(2)
        m = rng.normal(scale=2.0, size=(4, 15))
        cols = project_columns(m)
        for j in range(15):
            np.testing.assert_allclose(cols[:, j], project_simplex(m[:, j]), atol=1e-12)


class TestGreedyMergeInit:
    def test_identity_when_n_equals_k(self):
        a = np.eye(3)
        cfg = GdmConfig(n_clusters=3, seed=0)
        np.testing.assert_array_equal(greedy_merge_init(a, cfg), [0, 1, 2])

    def test_single_cluster(self):
        a = np.random.default_rng(0).normal(size=(4, 7))
        cfg = GdmConfig(n_clusters=1, seed=0)
        assert set(greedy_merge_init(a, cfg)) == {0}

    def test_recovers_separated_clusters(self):
        a = two_separated_lines()
        cfg = GdmConfig(n_clusters=2, seed=0)
        labels = greedy_merge_init(a, cfg)
        assert misclassification_rate(labels, [0] * 5 + [1] * 5) == 0.0
        # every cross-cluster merge yields a strictly larger global dimension
        committed = global_dimension_hard(a, labels, PARAMS, n_clusters=2)
        merged = global_dimension_hard(a, np.zeros(10, dtype=int), PARAMS, n_clusters=1)
        assert merged > committed


class TestDescend:
    def test_zero_iterations_is_identity(self):
        a = two_separated_lines()
        m0 = indicator_membership(np.array([0] * 5 + [1] * 5), 2)
        cfg = GdmConfig(n_clusters=2, grad_iters=0, seed=0)
        np.testing.assert_array_equal(descend(a, m0, cfg), m0)

    def test_columns_stay_on_simplex_every_iteration(self):
        mix = sample_subspace_mixture(
            SyntheticSpec(dims=(2, 3), points_per_cluster=20, noise_sigma=0.02, seed=3)
        )
        m = indicator_membership(np.zeros(mix.data.shape[1], dtype=int) , 2)
        m[1] = 0.4
        m[0] = 0.6
        cfg = GdmConfig(n_clusters=2, grad_iters=1, seed=3)
        for _ in range(15):
            m = descend(mix.data, m, cfg)
            validate_membership(m, tol=1e-10)

    def test_zero_gradient_returns_immediately(self):
        a = np.zeros((4, 6))
        m0 = indicator_membership(np.array([0, 0, 0, 1, 1, 1]), 2)
        cfg = GdmConfig(n_clusters=2, grad_iters=30, seed=0)
        np.testing.assert_array_equal(descend(a, m0, cfg), m0)

    def test_descent_sanity_band(self):
        # from a generic interior start, at least 80% of the fixed-step
        # iterations must not increase the objective (tolerance 1e-6)
        good = total = 0
        for seed in range(50):
            mix = sample_subspace_mixture(
                SyntheticSpec(dims=(2, 3), points_per_cluster=30,
                              noise_sigma=0.01, seed=seed)
            )
            rng = np.random.default_rng(seed + 500)
            m0 = project_columns(rng.uniform(size=(2, mix.data.shape[1])))
            cfg = GdmConfig(n_clusters=2, seed=seed)
            _, trace = _descend_loop(mix.data, m0, cfg, cfg.objective_params(),
                                     outlier=False)
            diffs = np.diff(trace)
            good += int(np.sum(diffs <= 1e-6))
            total += diffs.size
        assert good / total >= 0.8


def test_threshold_rules():
    m = np.array([
        [0.0, 1 / 3, 0.40],
        [1.0, 1 / 3, 0.35],
        [0.0, 1 / 3, 0.25],
    ])
    np.testing.assert_array_equal(threshold(m), [1, 0, 0])


class TestGeneticRefine:
    def test_fixed_point_unchanged(self):
        a = two_separated_lines()
        labels = np.array([0] * 5 + [1] * 5)
        cfg = GdmConfig(n_clusters=2, seed=0)
        np.testing.assert_array_equal(genetic_refine(a, labels, cfg), labels)

    def test_zero_passes_is_identity(self):
        a = two_separated_lines()
        bad = np.array([0] * 5 + [1] * 4 + [0])
        cfg = GdmConfig(n_clusters=2, genetic_passes=0, seed=0)
        np.testing.assert_array_equal(genetic_refine(a, bad, cfg), bad)

    def test_corrects_single_mislabeled_point(self):
        a = two_separated_lines()
        bad = np.array([0, 0, 0, 1, 0, 1, 1, 1, 1, 1])
        cfg = GdmConfig(n_clusters=2, seed=0)
        before = global_dimension_hard(a, bad, PARAMS, n_clusters=2)
        fixed = genetic_refine(a, bad, cfg)
        after = global_dimension_hard(a, fixed, PARAMS, n_clusters=2)
        np.testing.assert_array_equal(fixed, [0] * 5 + [1] * 5)
        assert after < before

    def test_never_increases_hard_gd(self):
        for seed in range(8):
            mix = sample_subspace_mixture(
                SyntheticSpec(dims=(2, 2), points_per_cluster=15,
                              noise_sigma=0.05, seed=seed)
            )
            rng = np.random.default_rng(seed)
            labels = rng.integers(0, 2, size=mix.data.shape[1])
            labels[:2] = [0, 1]
            cfg = GdmConfig(n_clusters=2, seed=seed)
            before = global_dimension_hard(mix.data, labels, PARAMS, n_clusters=2,
                                           on_degenerate="zero")
            refined = genetic_refine(mix.data, labels, cfg)
            after = global_dimension_hard(mix.data, refined, PARAMS, n_clusters=2,
                                          on_degenerate="zero")
            assert after <= before

    def test_label_permutation_equivariance(self):
        mix = sample_subspace_mixture(
            SyntheticSpec(dims=(1, 2, 3), points_per_cluster=12,
                          noise_sigma=0.05, seed=9)
        )
        rng = np.random.default_rng(9)
        labels = rng.integers(0, 3, size=mix.data.shape[1])
        labels[:3] = [0, 1, 2]
        cfg = GdmConfig(n_clusters=3, seed=9)
        base = genetic_refine(mix.data, labels, cfg)
        perm = np.array([2, 0, 1])
        permuted = genetic_refine(mix.data, perm[labels], cfg)
        np.testing.assert_array_equal(permuted, perm[base])

    def test_never_empties_a_cluster(self):
        # both clusters live on the same line: merging would lower the
        # global dimension, but the only member of cluster 1 must stay
        a = np.zeros((5, 6))
        a[0] = [1.0, 1.2, 1.4, 1.6, 1.8, 2.0]
        labels = np.array([0, 0, 0, 0, 0, 1])
        cfg = GdmConfig(n_clusters=2, seed=0)
        refined = genetic_refine(a, labels, cfg)
        assert (refined == 1).sum() == 1


class TestGdm:
    def test_noiseless_orthogonal_subspaces(self):
        rng = np.random.default_rng(0)
        basis = np.eye(9)
        a = np.concatenate(
            [
                basis[:, :2] @ rng.normal(size=(2, 60)),
                basis[:, 2:5] @ rng.normal(size=(3, 60)),
            ],
            axis=1,
        )
        res = gdm(a, GdmConfig(n_clusters=2, seed=0))
        truth = np.array([0] * 60 + [1] * 60)
        assert misclassification_rate(res.labels, truth) == 0.0

    def test_selection_invariant_and_consistency(self):
        mix = sample_subspace_mixture(
            SyntheticSpec(dims=(2, 3), points_per_cluster=25, noise_sigma=0.01, seed=5)
        )
        res = gdm(mix.data, GdmConfig(n_clusters=2, seed=5))
        assert res.gd_value == min(res.restart_gd_values)
        assert np.all(res.gd_value <= res.restart_gd_values)
        recomputed = global_dimension_hard(
            mix.data, res.labels, PARAMS, n_clusters=2, on_degenerate="zero"
        )
        assert res.gd_value == pytest.approx(recomputed, abs=1e-8)
        assert res.restarts_run == 10
        assert res.membership.shape == (2, mix.data.shape[1])
        assert res.trace.size >= 1

    def test_determinism_bit_for_bit(self):
        mix = sample_subspace_mixture(
            SyntheticSpec(dims=(2, 3), points_per_cluster=25, noise_sigma=0.01, seed=6)
        )
        cfg = GdmConfig(n_clusters=2, seed=42)
        r1 = gdm(mix.data, cfg)
        r2 = gdm(mix.data, cfg)
        np.testing.assert_array_equal(r1.labels, r2.labels)
        assert r1.gd_value == r2.gd_value
        np.testing.assert_array_equal(r1.membership, r2.membership)

    def test_thread_count_does_not_change_winner(self):
        mix = sample_subspace_mixture(
            SyntheticSpec(dims=(2, 3), points_per_cluster=25, noise_sigma=0.01, seed=7)
        )
        cfg = GdmConfig(n_clusters=2, seed=7)
        r1 = gdm(mix.data, cfg, threads=1)
        r4 = gdm(mix.data, cfg, threads=4)
        np.testing.assert_array_equal(r1.labels, r4.labels)
        assert r1.gd_value == r4.gd_value

    def test_single_cluster(self):
        mix = sample_subspace_mixture(
            SyntheticSpec(dims=(3,), points_per_cluster=40, seed=8)
        )
        res = gdm(mix.data, GdmConfig(n_clusters=1, seed=8))
        assert set(res.labels) == {0}
        assert res.per_cluster_dims[0] == pytest.approx(res.gd_value)

    def test_requires_more_points_than_clusters(self):
        with pytest.raises(InvalidParameterError):
            gdm(np.eye(3), GdmConfig(n_clusters=3, seed=0))
