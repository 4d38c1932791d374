"""Classical comparators on the raw series: DTW 1-NN and 2-medoid clustering."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numba
import numpy as np


@numba.njit(cache=True)
def _dtw(a, b, window, squared):
    n, m = a.shape[0], b.shape[0]
    inf = np.inf
    prev = np.full(m + 1, inf)
    curr = np.full(m + 1, inf)
    prev[0] = 0.0
    for i in range(1, n + 1):
        curr[:] = inf
        lo, hi = 1, m
        if window >= 0:
            lo = max(1, i - window)
            hi = min(m, i + window)
        for j in range(lo, hi + 1):
            d = a[i - 1] - b[j - 1]
            cost = d * d if squared else abs(d)
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = cost + best
        prev, curr = curr, prev
    return prev[m]


def dtw(a, b, window: int | None = None, squared: bool = False) -> float:
    """DTW with steps (i-1, j), (i, j-1), (i-1, j-1) and local cost ``|a_i - b_j|``.

    ``window`` is a Sakoe-Chiba radius on ``|i - j|``; ``squared`` switches
    the local cost to ``(a_i - b_j)**2``.
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("dtw needs non-empty sequences")
    if window is not None:
        if window < 0 or window < abs(a.size - b.size):
            raise ValueError(f"window {window} cannot connect lengths {a.size} and {b.size}")
    return float(_dtw(a, b, -1 if window is None else int(window), squared))


def _values(items):
    return [np.asarray(getattr(x, "values", x), dtype=float) for x in items]


def dtw_matrix(series, window=None, squared=False) -> np.ndarray:
    """Symmetric pairwise DTW matrix with an exact zero diagonal."""
    vals = _values(series)
    n = len(vals)
    D = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        D[i, j] = D[j, i] = dtw(vals[i], vals[j], window, squared)
    return D


def save_matrix_csv(D: np.ndarray, path, ids=None):
    ids = list(range(len(D))) if ids is None else list(ids)
    with open(path, "w") as fh:
        fh.write("," + ",".join(map(str, ids)) + "\n")
        for i, row in zip(ids, D):
            fh.write(f"{i}," + ",".join(repr(float(v)) for v in row) + "\n")


def knn1_dtw(train, test, window=None, squared=False) -> list:
    """Label of the nearest training series under DTW; ties go to the earlier train item."""
    if not train:
        raise ValueError("empty training set")
    train_vals = _values(train)
    labels = []
    for x in _values(test):
        dists = [dtw(x, t, window, squared) for t in train_vals]
        labels.append(train[int(np.argmin(dists))].label)
    return labels


def pam_2medoids(D: np.ndarray, max_iter: int = 100):
    """PAM with k=2 started from the most distant pair; returns (medoids, assignment, cost)."""
    n = len(D)
    if n < 2:
        raise ValueError("need at least two items to cluster")
    flat = int(np.argmax(np.triu(D, 1)))
    medoids = sorted(divmod(flat, n))
    if medoids[0] == medoids[1]:
        medoids = [0, 1]

    def cost(meds):
        return D[:, meds].min(axis=1).sum()

    current = cost(medoids)
    for _ in range(max_iter):
        best_swap, best_cost = None, current
        for slot in range(2):
            for h in range(n):
                if h in medoids:
                    continue
                trial = list(medoids)
                trial[slot] = h
                c = cost(trial)
                if c < best_cost - 1e-12:
                    best_swap, best_cost = trial, c
        if best_swap is None:
            break
        medoids, current = sorted(best_swap), best_cost
    assignment = np.argmin(D[:, medoids], axis=1)
    return medoids, assignment, float(current)


@dataclass
class ClusterResult:
    medoids: list[int]
    assignment: np.ndarray
    cost: float
    label_map: dict
    predicted: list


def cluster2_dtw(series, true_labels=None, window=None, squared=False, D=None) -> ClusterResult:
    """Two-way k-medoids on pairwise DTW, clusters mapped to the two most frequent labels.

    Of the two possible cluster-to-label mappings the one with the higher
    accuracy against ``true_labels`` is kept. Without labels clusters map to
    ``0`` and ``1``.
    """
    if D is None:
        D = dtw_matrix(series, window, squared)
    medoids, assignment, cost = pam_2medoids(D)
    if true_labels is None:
        label_map = {0: 0, 1: 1}
    else:
        true_labels = list(true_labels)
        classes = sorted(set(true_labels), key=lambda c: (-true_labels.count(c), str(c)))
        if len(classes) == 1:
            classes = classes * 2
        c0, c1 = classes[0], classes[1]
        options = [{0: c0, 1: c1}, {0: c1, 1: c0}]
        hits = [sum(m[k] == t for k, t in zip(assignment, true_labels)) for m in options]
        label_map = options[int(np.argmax(hits))]
    predicted = [label_map[int(k)] for k in assignment]
    return ClusterResult(medoids, assignment, cost, label_map, predicted)


def accuracy_report(true_labels, predicted_labels) -> dict:
    """Per-class recall and the support-weighted mean (equal to overall accuracy)."""
    true_labels, predicted_labels = list(true_labels), list(predicted_labels)
    if len(true_labels) != len(predicted_labels):
        raise ValueError("label sequences differ in length")
    if not true_labels:
        raise ValueError("no labels")
    per_class = {}
    for c in sorted(set(true_labels), key=str):
        idx = [i for i, t in enumerate(true_labels) if t == c]
        per_class[c] = sum(predicted_labels[i] == c for i in idx) / len(idx)
    weighted = sum(p == t for p, t in zip(predicted_labels, true_labels)) / len(true_labels)
    return {"per_class": per_class, "weighted": weighted}
