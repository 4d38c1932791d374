"""
End-to-end QUBO classification on Chinatown
============================================

Encode with SFA (5 letters, alphabet of 5), pull every training word across
each test word, anneal the resulting QUBO and label by the largest common
subset. Reports land in ``demo_output/chinatown``.

A full pass over the 22 bundled test series at 2000 reads takes a few minutes
on one core, so this demo defaults to 300 reads. Pass a number to change it::

    python3 demos/04_chinatown_end_to_end.py 2000
"""

import sys
from pathlib import Path

from tsqubo import ExperimentConfig, load_dataset, run_experiment

reads = int(sys.argv[1]) if len(sys.argv) > 1 else 300
root = Path(__file__).resolve().parents[1] / "data" / "ucr"
ds = load_dataset("ChinatownSubset", root)

cfg = ExperimentConfig.from_preset("chinatown", num_reads=reads, seed=0)
run = run_experiment(cfg, ds)

for item in run.items:
    mark = "ok " if item.correct else "bad"
    print(f"{mark} test {item.test_id:>3}  true {item.true_label}  got {item.assigned_label}  "
          f"{len(item.selected):>2} subsets  coverage {item.coverage_fraction:.2f}  "
          f"{item.n_vars} vars")

print("weighted accuracy:", round(run.accuracy["weighted"], 3), run.accuracy["per_class"])
out = run.write(Path("demo_output") / "chinatown")
print("written to", out)
