"""
Pulling one word across another and solving the cover
======================================================

Two five-letter words: the test word ``ABACD`` and a single training word
``CBACA``. Sliding the training word across the test word gives one candidate
subset per relative shift. The QUBO then chooses the fewest subsets that cover
as many test positions as possible.
"""

from tsqubo import build_family, build_qubo, decode, exhaustive, greedy_cover, pull_pair
from tsqubo.encoder import from_letters, to_letters

test = from_letters("ABACD", 5, source_id=100)
train = from_letters("CBACA", 5, source_id=0, label=1)

# positions of the test word that line up with an identical letter, per shift
for shift, positions in zip(range(-4, 5), pull_pair(test, train)):
    print(f"shift {shift:+d}: {sorted(positions)}")

# Position 4 ('D') never matches, so the best we can hope for is 4/5.
family = build_family(test, [train])
print("non-empty subsets:", [sorted(s.positions) for s in family.subsets])

q = build_qubo(family, A=2, B=1)
print(f"{q.num_vars} variables, {len(q.quadratic)} couplings")

# 11 variables is small enough to enumerate
result = exhaustive(q)
print("ground energy:", result.best.energy, "degeneracy:", result.info["degeneracy"])
for sample in result.ground_states():
    sol = decode(q, sample.assignment, family)
    print("  cover", [sorted(s.positions) for s in sol.selected], "coverage", sol.coverage_fraction)

# the greedy heuristic lands on the same two subsets here
print("greedy:", [sorted(s.positions) for s in greedy_cover(family).selected])
print("test word", to_letters(test.symbols), "train word", to_letters(train.symbols))
