import itertools

import numpy as np
import pytest

from oracles import direct_energy, min_cover_size, random_sets
from tsqubo.encoder import SymbolicWord
from tsqubo.pulling import SubsetFamily, build_family
from tsqubo.qubo import COUNT, SET, Qubo, build_qubo, decode, energy
from tsqubo.solver import exhaustive


def all_assignments(n):
    return np.array(list(itertools.product([0, 1], repeat=n)), dtype=np.uint8)


def brute_ground(q):
    X = all_assignments(q.num_vars)
    E = energy(q, X)
    return X, E


def test_single_element_instance():
    fam = SubsetFamily.from_sets(1, [{0}])
    q = build_qubo(fam, A=2, B=1)
    assert q.num_vars == 2
    X, E = brute_ground(q)
    assert E.min() == 1.0
    assert X[np.argmin(E)].tolist() == [1, 1]
    assert energy(q, [0, 0]) == 2.0


def test_two_element_instance_unique_ground():
    fam = SubsetFamily.from_sets(2, [{0}, {0, 1}])
    q = build_qubo(fam, A=2, B=1)
    X, E = brute_ground(q)
    ground = X[E == E.min()]
    assert E.min() == 1.0 and len(ground) == 1
    sol = decode(q, ground[0], fam)
    assert [sorted(s.positions) for s in sol.selected] == [[0, 1]]
    assert sol.coverage_fraction == 1.0 and sol.feasible
    empty = decode(q, np.zeros(q.num_vars, dtype=int), fam)
    assert empty.selected == () and empty.coverage_fraction == 0 and not empty.feasible


def test_variable_layout():
    fam = SubsetFamily.from_sets(3, [{0, 1}, {1}, {1, 2}])
    q = build_qubo(fam)
    kinds = [(v.kind, v.subset, v.element, v.multiplicity) for v in q.variables]
    assert kinds == [
        (SET, 0, None, None), (SET, 1, None, None), (SET, 2, None, None),
        (COUNT, None, 0, 1),
        (COUNT, None, 1, 1), (COUNT, None, 1, 2), (COUNT, None, 1, 3),
        (COUNT, None, 2, 1),
    ]
    assert [v.index for v in q.variables] == list(range(8))


def test_penalty_validation():
    fam = SubsetFamily.from_sets(1, [{0}])
    for A, B in [(1, 1), (1, 2), (2, 0), (2, -1)]:
        with pytest.raises(ValueError):
            build_qubo(fam, A, B)
    with pytest.raises(ValueError):
        build_qubo(SubsetFamily(2, ()))


def test_worst_case_variable_count():
    rng = np.random.default_rng(0)
    test = SymbolicWord(rng.integers(0, 5, 5), 5, 99)
    trains = [SymbolicWord(rng.integers(0, 5, 5), 5, i, i % 2) for i in range(20)]
    fam = build_family(test, trains, prune_empty=False)
    q = build_qubo(fam, worst_case_M=True)
    assert q.num_vars == 20 * (2 * 5 - 1) * (5 + 1) == 1080


def test_uncoverable_element_is_constant_penalty():
    fam = SubsetFamily.from_sets(3, [{0}, {1}])
    q = build_qubo(fam, A=3, B=1)
    assert q.num_vars == 4
    assert all(v.element != 2 for v in q.variables)
    assert energy(q, [1, 1, 1, 1]) == 3 + 2


@pytest.mark.parametrize("worst_case", [False, True])
def test_expansion_matches_direct_evaluation(worst_case):
    rng = np.random.default_rng(11 + worst_case)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        N = int(rng.integers(1, 6 if worst_case else 8))
        sets = random_sets(rng, n, N, coverable=rng.random() < 0.5)
        A = float(rng.uniform(1.0, 5.0))
        B = float(rng.uniform(0.01, 0.99)) * A
        q = build_qubo(SubsetFamily.from_sets(n, sets), A, B, worst_case_M=worst_case)
        X = rng.integers(0, 2, size=(200, q.num_vars))
        got = energy(q, X)
        for x, e in zip(X, got):
            assert abs(e - direct_energy(sets, n, x, A, B, worst_case)) < 1e-9


def test_exact_cover_energy_is_B_times_size():
    fam = SubsetFamily.from_sets(4, [{0, 1}, {2}, {3}, {1, 2}])
    q = build_qubo(fam, A=2, B=0.75)
    chosen = [0, 1, 2]
    x = np.zeros(q.num_vars, dtype=int)
    x[chosen] = 1
    for v in q.variables:
        if v.kind == COUNT:
            times = sum(v.element in fam.subsets[i].positions for i in chosen)
            x[v.index] = int(v.multiplicity == times)
    assert energy(q, x) == pytest.approx(0.75 * 3, abs=1e-12)
    assert decode(q, x, fam).feasible


def test_golden_pair_best_decode(golden_pair_words):
    test, train = golden_pair_words
    fam = build_family(test, [train])
    q = build_qubo(fam)
    result = exhaustive(q)
    assert result.best.energy == 2 * 1 + 2
    for sample in result.ground_states():
        sol = decode(q, sample.assignment, fam)
        assert sol.covered == {0, 1, 2, 3}
        assert sol.coverage_fraction == pytest.approx(4 / 5)
        assert sol.num_selected == 2
        assert not sol.feasible


def _ground_state_selection(q, fam):
    res = exhaustive(q, pivots=q.set_var_indices)
    return res, [decode(q, s.assignment, fam) for s in res.ground_states()]


def test_ground_state_soundness_and_one_hot():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n, N = int(rng.integers(1, 7)), int(rng.integers(1, 11))
        sets = random_sets(rng, n, N)
        fam = SubsetFamily.from_sets(n, sets)
        q = build_qubo(fam, 2, 1)
        res, sols = _ground_state_selection(q, fam)
        assert res.best.energy == min_cover_size(sets, n)
        for sample, sol in zip(res.ground_states(), sols):
            assert sol.feasible
            x = sample.assignment
            for alpha in range(n):
                active = [v.multiplicity for v in q.variables
                          if v.kind == COUNT and v.element == alpha and x[v.index]]
                assert active == [sum(alpha in s.positions for s in sol.selected)]


def test_raising_B_keeps_unique_cover():
    rng = np.random.default_rng(8)
    checked = 0
    while checked < 15:
        n, N = int(rng.integers(2, 6)), int(rng.integers(2, 8))
        sets = random_sets(rng, n, N)
        k = min_cover_size(sets, n)
        covers = [c for c in itertools.combinations(range(N), k)
                  if set().union(*(sets[i] for i in c)) == set(range(n))]
        if len(covers) != 1:
            continue
        fam = SubsetFamily.from_sets(n, sets)
        sizes = []
        for B in (0.25, 0.5, 1.0, 1.5, 1.9):
            q = build_qubo(fam, 2.0, B)
            _, sols = _ground_state_selection(q, fam)
            assert {s.selected_indices for s in sols} == {covers[0]}
            sizes.append(sols[0].num_selected)
        assert sizes == sorted(sizes)
        checked += 1


def test_text_roundtrip(tmp_path):
    fam = SubsetFamily.from_sets(3, [{0, 1}, {1}, {1, 2}])
    q = build_qubo(fam, 2.5, 0.5)
    path = tmp_path / "q.txt"
    q.save(path)
    header = path.read_text().splitlines()[0].split()
    assert header == [str(q.num_vars), repr(q.offset), "2.5", "0.5"]
    back = Qubo.load(path)
    X = np.random.default_rng(0).integers(0, 2, size=(50, q.num_vars))
    np.testing.assert_array_equal(energy(back, X), energy(q, X))


def test_energy_length_check():
    q = build_qubo(SubsetFamily.from_sets(1, [{0}]))
    with pytest.raises(ValueError):
        energy(q, [0, 1, 0])
