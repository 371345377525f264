"""Posterior update tests against a brute-force dense linear-algebra oracle.

The oracle materializes the stacked one-hot design matrix and solves the
normal equations with explicit matrix inverses, mirroring the same EM loop
structure.  The package code never sees these matrices; agreement therefore
checks the algebra, not the implementation.
"""

import numpy as np
import pytest

from activesearch import (
    BeliefPosterior,
    EmConfig,
    GridSpec,
    NumericalFailure,
    SensingDataset,
    SensingRecord,
    RecordKind,
    em_posterior,
    gamma_update,
    jittered_cholesky,
    sample_posterior,
)


def make_dataset(grid, triples):
    ds = SensingDataset(grid)
    for cell, y, c in triples:
        ds.append(SensingRecord(cell_index=cell, observation_y=y, confidence_c=c,
                                source_robot=0, kind=RecordKind.SELF_POSITION))
    return ds


def dense_em_oracle(triples, num_cells, max_iters=100, tol=1e-6, a_m=0.1, b_m=1.0):
    """Reference EM on explicit matrices: V = inv(inv(Gamma) + X'WX), mu = V X'W y."""
    n = len(triples)
    X = np.zeros((n, num_cells))
    y = np.zeros(n)
    w = np.zeros(n)
    for i, (cell, obs, conf) in enumerate(triples):
        X[i, cell] = 1.0
        y[i] = obs
        w[i] = conf
    W = np.diag(w)
    gamma = np.ones(num_cells)
    V = np.eye(num_cells)
    mu = np.zeros(num_cells)
    for _ in range(max_iters):
        V = np.linalg.inv(np.diag(1.0 / gamma) + X.T @ W @ X)
        mu = V @ X.T @ W @ y
        gamma_new = (np.diag(V) + mu**2 + 2.0 * b_m) / (1.0 + 2.0 * a_m)
        delta = np.max(np.abs(gamma_new - gamma))
        gamma = gamma_new
        if delta < tol:
            break
    return mu, V, gamma


def test_empty_dataset_single_estep_is_prior():
    grid = GridSpec(2, 2, 1.0)
    post = em_posterior(SensingDataset(grid), grid, EmConfig(max_iters=1))
    assert np.array_equal(post.mean, np.zeros(4)), "no data must give a zero mean"
    assert np.array_equal(post.covariance, np.eye(4)), "unit responsibilities give identity covariance"


def test_single_record_single_estep_closed_form():
    # one observation (cell 0, y=1, c=1) on two cells, responsibilities fixed at 1:
    # posterior precision at cell 0 is 1/1 + 1 = 2
    grid = GridSpec(2, 1, 1.0)
    ds = make_dataset(grid, [(0, 1.0, 1.0)])
    post = em_posterior(ds, grid, EmConfig(max_iters=1))
    assert abs(post.covariance[0, 0] - 0.5) < 1e-15
    assert abs(post.mean[0] - 0.5) < 1e-15
    assert abs(post.covariance[1, 1] - 1.0) < 1e-15
    assert abs(post.mean[1]) < 1e-15


def test_two_identical_records_single_estep():
    grid = GridSpec(2, 1, 1.0)
    ds = make_dataset(grid, [(0, 1.0, 1.0), (0, 1.0, 1.0)])
    post = em_posterior(ds, grid, EmConfig(max_iters=1))
    assert abs(post.covariance[0, 0] - 1.0 / 3.0) < 1e-15
    assert abs(post.mean[0] - 2.0 / 3.0) < 1e-15


def test_gamma_update_hand_values():
    post = BeliefPosterior(
        mean=np.array([0.5]), covariance=np.array([[0.5]]), responsibilities=np.ones(1)
    )
    out = gamma_update(post, a_m=0.1, b_m=1.0)
    assert abs(out[0] - (0.5 + 0.25 + 2.0) / 1.2) < 1e-15

    zero = BeliefPosterior(mean=np.zeros(1), covariance=np.zeros((1, 1)), responsibilities=np.ones(1))
    assert abs(gamma_update(zero, 0.1, 1.0)[0] - 2.0 / 1.2) < 1e-15
    assert gamma_update(zero, 0.0, 0.0)[0] == 0.0


def test_em_matches_dense_oracle_on_random_instances():
    rng = np.random.default_rng(42)
    for trial in range(30):
        m = int(rng.integers(2, 21))
        n = int(rng.integers(0, 41))
        grid = GridSpec(m, 1, 1.0)
        triples = [
            (int(rng.integers(m)), float(rng.normal()), float(rng.uniform(0.005, 1.0)))
            for _ in range(n)
        ]
        post = em_posterior(make_dataset(grid, triples), grid)
        mu_ref, V_ref, gamma_ref = dense_em_oracle(triples, m)
        scale = max(1.0, float(np.max(np.abs(mu_ref))))
        assert np.max(np.abs(post.mean - mu_ref)) / scale < 1e-8, f"mean mismatch on trial {trial}"
        v_scale = max(1.0, float(np.max(np.abs(np.diag(V_ref)))))
        assert np.max(np.abs(np.diag(post.covariance) - np.diag(V_ref))) / v_scale < 1e-8
        assert np.max(np.abs(post.responsibilities - gamma_ref)) / np.max(gamma_ref) < 1e-8
        off_diag = V_ref - np.diag(np.diag(V_ref))
        assert np.max(np.abs(off_diag)) < 1e-12, "one-hot rows must give a diagonal covariance"


def test_untouched_cells_drift_to_fixed_point():
    """With no data the M-step iterates gamma -> (gamma + 2)/1.2, whose fixed point is 10."""
    grid = GridSpec(3, 1, 1.0)
    post = em_posterior(SensingDataset(grid), grid)
    assert np.all(np.abs(post.responsibilities - 10.0) < 1e-4)


def test_responsibilities_stay_positive():
    rng = np.random.default_rng(7)
    grid = GridSpec(6, 1, 1.0)
    for _ in range(10):
        triples = [
            (int(rng.integers(6)), float(rng.normal()), float(rng.uniform(0.005, 1.0)))
            for _ in range(int(rng.integers(1, 30)))
        ]
        post = em_posterior(make_dataset(grid, triples), grid)
        assert np.all(post.responsibilities > 0)


def test_duplicate_record_never_raises_variance():
    rng = np.random.default_rng(11)
    grid = GridSpec(5, 1, 1.0)
    for _ in range(20):
        triples = [
            (int(rng.integers(5)), float(rng.normal()), float(rng.uniform(0.01, 1.0)))
            for _ in range(int(rng.integers(1, 15)))
        ]
        cell, y, c = triples[int(rng.integers(len(triples)))]
        before = em_posterior(make_dataset(grid, triples), grid)
        after = em_posterior(make_dataset(grid, triples + [(cell, y, c)]), grid)
        assert after.covariance[cell, cell] <= before.covariance[cell, cell] + 1e-12


def test_sample_posterior_zero_covariance_collapses_to_mean():
    post = BeliefPosterior(
        mean=np.array([3.0, 7.0]), covariance=np.zeros((2, 2)), responsibilities=np.ones(2)
    )
    rng = np.random.default_rng(0)
    sample = sample_posterior(post, rng)
    assert np.max(np.abs(sample - np.array([3.0, 7.0]))) < 1e-3


def test_sample_posterior_standard_normal_statistics():
    post = BeliefPosterior(
        mean=np.zeros(4), covariance=np.eye(4), responsibilities=np.ones(4)
    )
    rng = np.random.default_rng(123)
    draws = np.array([sample_posterior(post, rng) for _ in range(100_000)])
    assert np.max(np.abs(draws.mean(axis=0))) < 0.02
    assert np.max(np.abs(draws.var(axis=0) - 1.0)) < 0.05


def test_sample_posterior_deterministic_for_fixed_seed():
    post = BeliefPosterior(
        mean=np.arange(3.0), covariance=np.diag([1.0, 2.0, 3.0]), responsibilities=np.ones(3)
    )
    a = sample_posterior(post, np.random.default_rng(99))
    b = sample_posterior(post, np.random.default_rng(99))
    assert np.array_equal(a, b), "same seed must reproduce the sample bit for bit"


def test_jittered_cholesky_handles_singular_and_rejects_indefinite():
    lower = jittered_cholesky(np.zeros((3, 3)))
    assert np.all(np.isfinite(lower))
    with pytest.raises(NumericalFailure):
        jittered_cholesky(np.array([[-1.0]]))


def test_em_iterates_are_bounded_by_max_iters():
    grid = GridSpec(4, 1, 1.0)
    post = em_posterior(SensingDataset(grid), grid, EmConfig(max_iters=3))
    assert post.iterations == 3
