"""Slide training words across a test word and collect per-shift matches.

For a shift ``s`` the training word is placed so that its symbol ``j`` lies
under test position ``j + s``; the recorded set holds every test position
``p`` with ``test[p] == train[p - s]``. Shifts run from ``-(L-1)`` to
``L-1`` in ascending order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from tsqubo.encoder import SymbolicWord


@dataclass(frozen=True)
class PulledSubset:
    positions: frozenset[int]
    train_id: int | None
    train_label: int | str | None
    shift: int

    def __len__(self):
        return len(self.positions)

    def to_dict(self):
        return {
            "positions": sorted(self.positions),
            "train_id": self.train_id,
            "train_label": self.train_label,
            "shift": self.shift,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(frozenset(d["positions"]), d["train_id"], d["train_label"], d["shift"])


@dataclass(frozen=True)
class SubsetFamily:
    universe_size: int
    subsets: tuple[PulledSubset, ...]
    test_id: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "subsets", tuple(self.subsets))
        for sub in self.subsets:
            if any(p < 0 or p >= self.universe_size for p in sub.positions):
                raise ValueError(f"subset {sorted(sub.positions)} leaves universe of size {self.universe_size}")

    def __len__(self):
        return len(self.subsets)

    @property
    def universe(self) -> frozenset[int]:
        return frozenset(range(self.universe_size))

    def coverable(self) -> frozenset[int]:
        out = set()
        for sub in self.subsets:
            out |= sub.positions
        return frozenset(out)

    def to_json(self) -> str:
        return json.dumps(
            {
                "universe_size": self.universe_size,
                "test_id": self.test_id,
                "subsets": [s.to_dict() for s in self.subsets],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SubsetFamily":
        d = json.loads(text)
        return cls(d["universe_size"], tuple(PulledSubset.from_dict(s) for s in d["subsets"]), d["test_id"])

    @classmethod
    def from_sets(cls, universe_size: int, sets, test_id=None) -> "SubsetFamily":
        """Family from bare position sets; provenance is the set's index."""
        return cls(
            universe_size,
            tuple(PulledSubset(frozenset(s), i, None, 0) for i, s in enumerate(sets)),
            test_id,
        )


def pull_pair(test: SymbolicWord, train: SymbolicWord) -> list[frozenset[int]]:
    """Match sets for all ``2L-1`` shifts, empty ones included."""
    if len(test) != len(train):
        raise ValueError(f"word lengths differ: {len(test)} vs {len(train)}")
    if test.alphabet_size != train.alphabet_size:
        raise ValueError(
            f"alphabet sizes differ: {test.alphabet_size} vs {train.alphabet_size}"
        )
    L = len(test)
    a, b = test.symbols, train.symbols
    out = []
    for shift in range(-(L - 1), L):
        lo, hi = max(0, shift), min(L, L + shift)
        out.append(frozenset(p for p in range(lo, hi) if a[p] == b[p - shift]))
    return out


def build_family(
    test: SymbolicWord, train_set: list[SymbolicWord], prune_empty: bool = True
) -> SubsetFamily:
    if not train_set:
        raise ValueError("empty training set")
    L = len(test)
    subsets = []
    for train in train_set:
        for k, positions in enumerate(pull_pair(test, train)):
            if prune_empty and not positions:
                continue
            subsets.append(PulledSubset(positions, train.source_id, train.label, k - (L - 1)))
    return SubsetFamily(L, tuple(subsets), test.source_id)
