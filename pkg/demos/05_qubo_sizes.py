"""
How big do the QUBOs get?
=========================

With one counting variable per possible multiplicity of each position, the
worst case is ``N_train * (2L - 1) * (L + 1)`` variables. Dropping empty
subsets and sizing each position's counter by how many subsets actually
contain it shrinks that considerably. The CSV printed at the end is ready for
a histogram.
"""

from pathlib import Path

import numpy as np

from tsqubo import build_family, build_qubo, encode, fit_sfa, load_dataset

root = Path(__file__).resolve().parents[1] / "data" / "ucr"
ds = load_dataset("ChinatownSubset", root)
model = fit_sfa(ds.train, 5, 5)
train = [encode(model, ts) for ts in ds.train]

rows = ["dataset,test_id,n_vars,n_quadratic_terms"]
worst = []
for ts in ds.test:
    word = encode(model, ts, keep_label=False)
    worst.append(build_qubo(build_family(word, train, prune_empty=False), worst_case_M=True).num_vars)
    q = build_qubo(build_family(word, train))
    rows.append(f"{ds.name},{ts.id},{q.num_vars},{len(q.quadratic)}")

print("worst case:", sorted(set(worst)))
sizes = np.array([int(r.split(",")[2]) for r in rows[1:]])
print(f"pruned: min {sizes.min()}, median {np.median(sizes):.0f}, max {sizes.max()}")
print("\n".join(rows))
