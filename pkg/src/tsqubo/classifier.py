"""Label a reconstructed test word from the training series its cover came from."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from tsqubo.encoder import SymbolicWord
from tsqubo.pulling import PulledSubset, build_family
from tsqubo.qubo import build_qubo, decode
from tsqubo.solver import AnnealParams, anneal

LARGEST_COMMON = "largest_common"
NUM_COMMON = "num_common"
LARGEST_SUM = "largest_sum"
METRICS = (LARGEST_COMMON, NUM_COMMON, LARGEST_SUM)

UNASSIGNED = "unassigned"


def score_largest_common(selected) -> dict:
    scores = defaultdict(int)
    for s in selected:
        scores[s.train_id] = max(scores[s.train_id], len(s))
    return dict(scores)


def score_num_common(selected) -> dict:
    return dict(Counter(s.train_id for s in selected))


def score_sum(selected) -> dict:
    scores = defaultdict(int)
    for s in selected:
        scores[s.train_id] += len(s)
    return dict(scores)


_SCORERS = {
    LARGEST_COMMON: score_largest_common,
    NUM_COMMON: score_num_common,
    LARGEST_SUM: score_sum,
}


def winning_train(selected, metric: str = LARGEST_COMMON):
    """Training id with the top score; ties go to the larger element sum, then the lower id."""
    if metric not in _SCORERS:
        raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
    if not selected:
        return None
    primary = _SCORERS[metric](selected)
    sums = score_sum(selected)
    return min(primary, key=lambda t: (-primary[t], -sums[t], t))


def assign_label(selected, metric: str = LARGEST_COMMON):
    """Label of the winning training series, or ``UNASSIGNED`` for an empty selection."""
    winner = winning_train(selected, metric)
    if winner is None:
        return UNASSIGNED
    return next(s.train_label for s in selected if s.train_id == winner)


def per_train_stats(selected) -> dict:
    stats = {}
    for t in sorted({s.train_id for s in selected}):
        own = [s for s in selected if s.train_id == t]
        stats[t] = {
            "num_subsets_used": len(own),
            "largest_subset_size": max(len(s) for s in own),
            "total_elements": sum(len(s) for s in own),
        }
    return stats


@dataclass
class ReconstructionReport:
    test_id: int | None
    selected: list[PulledSubset]
    coverage_fraction: float
    assigned_label: object
    metric_used: str
    coverable_fraction: float = 1.0
    feasible: bool = False
    best_energy: float | None = None
    n_vars: int = 0
    n_quadratic: int = 0
    true_label: object = None
    per_train_stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.per_train_stats:
            self.per_train_stats = per_train_stats(self.selected)

    @property
    def correct(self) -> bool:
        return self.assigned_label != UNASSIGNED and self.assigned_label == self.true_label

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "true_label": self.true_label,
            "assigned_label": self.assigned_label,
            "metric_used": self.metric_used,
            "coverage_fraction": self.coverage_fraction,
            "coverable_fraction": self.coverable_fraction,
            "feasible": self.feasible,
            "best_energy": self.best_energy,
            "n_vars": self.n_vars,
            "n_quadratic": self.n_quadratic,
            "selected": [s.to_dict() for s in self.selected],
            "per_train_stats": {str(k): v for k, v in self.per_train_stats.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "ReconstructionReport":
        return cls(
            test_id=d["test_id"],
            selected=[PulledSubset.from_dict(s) for s in d["selected"]],
            coverage_fraction=d["coverage_fraction"],
            assigned_label=d["assigned_label"],
            metric_used=d["metric_used"],
            coverable_fraction=d["coverable_fraction"],
            feasible=d["feasible"],
            best_energy=d["best_energy"],
            n_vars=d["n_vars"],
            n_quadratic=d["n_quadratic"],
            true_label=d["true_label"],
        )


def _vote(labels):
    counts = Counter(l for l in labels if l != UNASSIGNED)
    if not counts:
        return UNASSIGNED
    top = max(counts.values())
    return next(l for l in labels if counts.get(l) == top)


def reconstruct(
    test: SymbolicWord,
    train_words: list[SymbolicWord],
    A: float = 2.0,
    B: float = 1.0,
    params: AnnealParams | None = None,
    metric: str = LARGEST_COMMON,
    prune_empty: bool = True,
    worst_case_M: bool = False,
    vote: bool = False,
) -> ReconstructionReport:
    """Pull, compile, anneal, decode and label a single test word.

    The test word's label is dropped before pulling. With ``vote`` every
    lowest-energy sample casts a label and the most frequent one wins;
    otherwise only the first lowest-energy sample is used.
    """
    family = build_family(test.unlabeled(), train_words, prune_empty=prune_empty)
    if len(family) == 0:
        return ReconstructionReport(test.source_id, [], 0.0, UNASSIGNED, metric, coverable_fraction=0.0)
    q = build_qubo(family, A, B, worst_case_M=worst_case_M)
    result = anneal(q, params)
    cover = decode(q, result.best.assignment, family)
    if vote:
        ground = result.ground_states()
        label = _vote([assign_label(decode(q, s.assignment, family).selected, metric) for s in ground])
    else:
        label = assign_label(cover.selected, metric)
    return ReconstructionReport(
        test_id=test.source_id,
        selected=list(cover.selected),
        coverage_fraction=cover.coverage_fraction,
        assigned_label=label,
        metric_used=metric,
        coverable_fraction=len(family.coverable()) / family.universe_size,
        feasible=cover.feasible,
        best_energy=result.best.energy,
        n_vars=q.num_vars,
        n_quadratic=len(q.quadratic),
    )
