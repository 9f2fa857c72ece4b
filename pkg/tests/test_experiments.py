import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multipen.experiments import (
    EmptyInput,
    EnsembleSpec,
    SignalSpec,
    condition_failure_study,
    gaussian_matrix,
    geometric_grid,
    grid_search_recovery,
    region_study,
    sample_signal,
    summarize,
)
from multipen.linalg import IndexSet


def test_summarize_examples():
    s = summarize([1, 2, 3, 4])
    assert (s.median, s.mean, s.minimum, s.maximum) == (2.5, 2.5, 1, 4)
    assert s.std_dev == pytest.approx(math.sqrt(1.25))
    assert summarize([1, 2, 3, 4], ddof=1).std_dev == pytest.approx(math.sqrt(5 / 3))
    one = summarize([7])
    assert (one.median, one.mean, one.std_dev, one.minimum, one.maximum) == (7, 7, 0, 7, 7)
    assert summarize([3.3] * 5).std_dev == 0
    with pytest.raises(EmptyInput):
        summarize([])
    mixed = summarize([1.0, math.inf, 3.0])
    assert mixed.excluded == 1 and mixed.mean == 2.0


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
def test_summarize_order(values):
    s = summarize(values)
    assert s.minimum <= s.median <= s.maximum
    assert s.std_dev >= 0


def test_geometric_grid():
    g = geometric_grid(0.0002, 1.25, 51)
    assert g.size == 51 and g[0] == 0.0002
    assert g[-1] == pytest.approx(0.0002 * 1.25**50)
    with pytest.raises(ValueError):
        geometric_grid(1.0, 2.0, 0)


def test_gaussian_matrix_deterministic():
    spec = EnsembleSpec(5, 7, matrix_count=3, master_seed=99)
    assert np.array_equal(gaussian_matrix(spec, 1), gaussian_matrix(spec, 1))
    assert not np.array_equal(gaussian_matrix(spec, 0), gaussian_matrix(spec, 1))
    with pytest.raises(IndexError):
        gaussian_matrix(spec, 3)


def test_gaussian_matrix_moments():
    spec = EnsembleSpec(100, 100, matrix_count=1, entry_std=1.0)
    A = gaussian_matrix(spec, 0)
    assert abs(A.mean()) < 4 * 1.0 / 100
    B = gaussian_matrix(EnsembleSpec(100, 100, matrix_count=1), 0)
    assert (B**2).sum(axis=0).mean() == pytest.approx(1.0, rel=0.1)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.booleans())
def test_sample_signal_invariants(seed, k, exact):
    spec = SignalSpec(N=30, k=k, c=1.5, magnitude_ceiling=3.0, d=0.3, exact_noise=exact)
    u, v = sample_signal(spec, None, np.random.default_rng(seed))
    nz = np.flatnonzero(u)
    assert nz.size == k
    assert np.abs(u[nz]).min() > 1.5 and np.abs(u).max() <= 3.0
    if exact:
        assert np.abs(v).max() == pytest.approx(0.3, abs=1e-15)
    else:
        assert np.abs(v).max() < 0.3


def test_sample_signal_default_setting_and_determinism():
    spec = SignalSpec(N=100, k=7, c=1.5, d=0.3)
    u, v = sample_signal(spec, None, np.random.default_rng([1, 2]))
    u2, v2 = sample_signal(spec, None, np.random.default_rng([1, 2]))
    assert np.count_nonzero(u) == 7
    assert np.abs(v).max() == 0.3
    assert np.array_equal(u, u2) and np.array_equal(v, v2)


def test_sample_signal_fixed_support():
    spec = SignalSpec(N=10, k=3)
    u, _ = sample_signal(spec, IndexSet((1, 4, 8), 10), np.random.default_rng(0))
    assert tuple(np.flatnonzero(u)) == (1, 4, 8)


def test_identity_ensemble_never_fails():
    spec = EnsembleSpec(8, 8, matrix_count=2, kind="identity")
    study = condition_failure_study(spec, 3, [math.inf, 10.0, 0.1])
    assert np.all(study.fractions == 0)


@pytest.mark.slow
def test_failure_decreases_with_beta_for_most_matrices():
    spec = EnsembleSpec(30, 60, matrix_count=10, master_seed=7)
    f = condition_failure_study(spec, 3, [math.inf, 10.0, 1.0, 0.1]).fractions
    ordered = np.all(np.diff(f, axis=1) <= 0, axis=1)
    assert ordered.mean() >= 0.9


def test_condition_study_shapes():
    spec = EnsembleSpec(10, 16, matrix_count=3, master_seed=5)
    study = condition_failure_study(spec, 2, [math.inf, 1.0])
    assert study.fractions.shape == (3, 2)
    assert all(0 <= f <= 1 for f in study.fractions.ravel())
    assert study.summaries[0].count == 3


def test_region_study_sigma_ordering_per_matrix():
    spec = EnsembleSpec(12, 16, matrix_count=4, master_seed=11)
    study = region_study(spec, 2, [0.1, 1.0, 5.0], theta_grid=np.linspace(0, 50, 6))
    assert np.all(study.sigma[:, 0] > study.sigma[:, 1])
    assert np.all(study.sigma[:, 1] > study.sigma[:, 2])
    assert study.theta_max.shape == (4, 3, 6)
    assert np.all(np.diff(study.theta_max, axis=2) >= 0)
    finite = np.isfinite(study.r)
    assert np.array_equal(~finite, study.failure > 0)


def _small_recovery(**kw):
    signal = SignalSpec(N=40, k=3, c=1.5, magnitude_ceiling=2.5, d=kw.pop("d", 0.3))
    ens = EnsembleSpec(kw.pop("m", 25), 40, master_seed=kw.pop("seed", 3))
    kw.setdefault("outer_iters", 10)
    kw.setdefault("inner_iters", 20)
    return grid_search_recovery(4, signal, ens, geometric_grid(0.001, 1.5, 20), geometric_grid(0.05, 2.0, 5), **kw)


def test_recovery_deterministic():
    a, b = _small_recovery(), _small_recovery()
    assert a.records == b.records


def test_noiseless_recovery_reaches_exact_support():
    study = _small_recovery(d=0.0, m=36, outer_iters=50, inner_iters=40).with_selection("sd")
    assert all(r.sd == 0 for r in study.records)


def test_multi_with_single_column_dominates_in_ae():
    study = _small_recovery(include_single_in_multi=True)
    single = {r.trial_id: r for r in study.method("single")}
    for r in study.method("multi"):
        assert r.ae <= single[r.trial_id].ae


def test_recovery_records_valid():
    study = _small_recovery()
    for r in study.records:
        assert r.ae >= 0 and 0 <= r.sd <= 40
    assert set(study.summaries) == {"single", "multi"}
    with pytest.raises(ValueError):
        study.with_selection("xx")
