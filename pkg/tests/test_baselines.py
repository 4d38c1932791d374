import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import best_two_partition_cost, dtw_all_paths
from tsqubo.baselines import (
    accuracy_report,
    cluster2_dtw,
    dtw,
    dtw_matrix,
    knn1_dtw,
    pam_2medoids,
    save_matrix_csv,
)
from tsqubo.dataio import TimeSeries


def test_dtw_examples():
    x = [0.3, -1.0, 2.5, 2.5]
    assert dtw(x, x) == 0
    assert dtw([0, 1], [0, 1, 1]) == 0
    assert dtw([0], [3]) == 3


def test_dtw_band_errors():
    with pytest.raises(ValueError):
        dtw([0, 1, 2, 3], [0, 1], window=1)
    with pytest.raises(ValueError):
        dtw([], [1])
    assert dtw([0, 1, 2, 3], [0, 1], window=2) >= dtw([0, 1, 2, 3], [0, 1])


seqs = st.lists(st.floats(-10, 10), min_size=1, max_size=7)


@settings(max_examples=300, deadline=None)
@given(seqs, seqs, st.booleans())
def test_dtw_against_path_enumeration(a, b, squared):
    got = dtw(a, b, squared=squared)
    assert got == pytest.approx(dtw_all_paths(a, b, squared), abs=1e-9)
    assert got == pytest.approx(dtw(b, a, squared=squared), abs=1e-9)
    assert got >= 0


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 9), st.integers(0, 8), st.integers(0, 1000))
def test_band_never_beats_free_warping(n, r, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=n), rng.normal(size=n)
    assert dtw(a, b) <= dtw(a, b, window=r) + 1e-12


def _ts(values, label, i):
    return TimeSeries(values, label, i)


def test_knn_examples():
    train = [_ts([0, 0, 0, 0], "flat", 0), _ts([0, 2, 0, 2], "zig", 1)]
    assert knn1_dtw(train, [_ts([0, 2, 0, 2], None, 5)]) == ["zig"]
    # dtw([0,1,0,1], flat) = 2 and dtw([0,1,0,1], zig) = 2 -> tie to the earlier train item
    probe = _ts([0, 1, 0, 1], None, 6)
    assert dtw(probe.values, train[0].values) == 2 == dtw(probe.values, train[1].values)
    assert knn1_dtw(train, [probe]) == ["flat"]
    # [0,2,0,1.5] is 0.5 from zig and 3.5 from flat
    assert knn1_dtw(train, [_ts([0, 2, 0, 1.5], None, 7)]) == ["zig"]


def test_matrix_properties(tmp_path):
    rng = np.random.default_rng(0)
    series = [rng.normal(size=10) for _ in range(6)]
    D = dtw_matrix(series)
    assert np.all(np.diag(D) == 0)
    assert np.allclose(D, D.T, atol=1e-9)
    save_matrix_csv(D, tmp_path / "d.csv")
    rows = (tmp_path / "d.csv").read_text().splitlines()
    assert len(rows) == 7 and float(rows[2].split(",")[1]) == D[1, 0]


def test_cluster_two_levels():
    series = [_ts(np.full(8, 0.0) + 0.01 * k, "low", k) for k in range(5)]
    series += [_ts(np.full(8, 5.0) + 0.01 * k, "high", 5 + k) for k in range(4)]
    truth = [s.label for s in series]
    res = cluster2_dtw(series, truth)
    assert res.predicted == truth
    flipped = [res.label_map[1 - int(k)] for k in res.assignment]
    acc = accuracy_report(truth, res.predicted)["weighted"]
    assert accuracy_report(truth, flipped)["weighted"] == pytest.approx(1 - acc)


def test_pam_matches_best_partition():
    rng = np.random.default_rng(3)
    for trial in range(5):
        centers = rng.normal(scale=3, size=(2, 12))
        series = [centers[k % 2] + rng.normal(scale=0.5, size=12) for k in range(12)]
        D = dtw_matrix(series)
        _, assignment, cost = pam_2medoids(D)
        assert cost == pytest.approx(best_two_partition_cost(D), abs=1e-9)
        planted = np.arange(12) % 2
        assert np.all(assignment == planted) or np.all(assignment == 1 - planted)


def test_accuracy_report():
    truth = [1] * 10 + [2] * 10
    pred = [1] * 7 + [2] * 3 + [2] * 9 + [1]
    rep = accuracy_report(truth, pred)
    assert rep["per_class"] == {1: 0.7, 2: 0.9}
    assert rep["weighted"] == pytest.approx(0.8)
    assert accuracy_report(truth, truth) == {"per_class": {1: 1.0, 2: 1.0}, "weighted": 1.0}
    # unassigned predictions count as wrong
    assert accuracy_report([1, 2], ["unassigned", 2])["weighted"] == 0.5
    with pytest.raises(ValueError):
        accuracy_report([1], [1, 2])


def test_weighted_equals_plain_accuracy_on_balanced_classes():
    rng = np.random.default_rng(1)
    truth = [1, 2] * 25
    pred = rng.choice([1, 2], size=50).tolist()
    rep = accuracy_report(truth, pred)
    assert rep["weighted"] == pytest.approx(np.mean(list(rep["per_class"].values())))
