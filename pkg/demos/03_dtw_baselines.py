"""
DTW baselines on the bundled Chinatown data
===========================================

1-nearest-neighbour DTW uses the training labels. The 2-medoid clustering
never sees them; its clusters are mapped onto classes afterwards in whichever
way scores better.
"""

from pathlib import Path

from tsqubo import load_dataset
from tsqubo.baselines import accuracy_report, cluster2_dtw, knn1_dtw

root = Path(__file__).resolve().parents[1] / "data" / "ucr"
ds = load_dataset("ChinatownSubset", root)
truth = [t.label for t in ds.test]

for squared in (False, True):
    pred = knn1_dtw(ds.train, ds.test, squared=squared)
    print(f"1-NN DTW ({'squared' if squared else 'absolute'} cost):", accuracy_report(truth, pred))

# a Sakoe-Chiba band of 10% of the length
print("1-NN DTW, band 2:", accuracy_report(truth, knn1_dtw(ds.train, ds.test, window=2)))

clusters = cluster2_dtw(ds.test, truth)
print("medoids:", clusters.medoids, "cost:", round(clusters.cost, 3))
print("2-medoid DTW:", accuracy_report(truth, clusters.predicted))
