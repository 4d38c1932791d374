"""
From a selected cover to a class label
======================================

Three subsets reconstruct the test word ``ACEEB``: two come from a training
series of class ``b`` and one from a series of class ``c``. The three scoring
rules all vote for ``b``, but they weigh the evidence differently.
"""

from tsqubo import PulledSubset
from tsqubo.classifier import METRICS, assign_label, per_train_stats

selection = [
    PulledSubset(frozenset({0, 3}), 1, "b", -1),
    PulledSubset(frozenset({2, 4}), 1, "b", 2),
    PulledSubset(frozenset({1}), 2, "c", 1),
]

for train_id, row in per_train_stats(selection).items():
    print(train_id, row)

for metric in METRICS:
    print(f"{metric:>15}: {assign_label(selection, metric)}")

# ties go to the higher total matched positions, then to the lower train id
tie = [PulledSubset(frozenset({0, 1}), 4, "x", 0), PulledSubset(frozenset({2, 3}), 2, "y", 1)]
print("symmetric tie ->", assign_label(tie))
print("nothing selected ->", assign_label([]))
