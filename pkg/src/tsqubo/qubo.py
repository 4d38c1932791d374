"""Set-cover QUBO with one-hot counting variables.

For universe elements ``alpha`` and subsets ``V_i``::

    H = A * sum_alpha (1 - sum_m y[alpha, m])**2
      + A * sum_alpha (sum_m m * y[alpha, m] - sum_{i: alpha in V_i} x[i])**2
      + B * sum_i x[i]

``x[i]`` selects subset ``i``; ``y[alpha, m]`` says ``alpha`` is covered
exactly ``m`` times. Both squares are expanded into linear, pairwise and
constant parts using ``b**2 == b`` for binary ``b``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from tsqubo.pulling import PulledSubset, SubsetFamily

SET = "set"
COUNT = "count"


@dataclass(frozen=True)
class Variable:
    kind: str
    index: int
    subset: int | None = None
    element: int | None = None
    multiplicity: int | None = None

    @property
    def name(self) -> str:
        if self.kind == SET:
            return f"x[{self.subset}]"
        return f"y[{self.element},{self.multiplicity}]"


@dataclass(frozen=True, eq=False)
class Qubo:
    num_vars: int
    linear: dict[int, float]
    quadratic: dict[tuple[int, int], float]
    offset: float = 0.0
    penalty_A: float = 2.0
    penalty_B: float = 1.0
    variables: tuple[Variable, ...] = field(default=())

    def __post_init__(self):
        for (u, v), c in self.quadratic.items():
            if u == v or not (0 <= u < self.num_vars and 0 <= v < self.num_vars):
                raise ValueError(f"bad quadratic key {(u, v)}")
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient at {(u, v)}")

    @cached_property
    def arrays(self):
        """Dense linear vector and COO triplets with ``i < j``."""
        lin = np.zeros(self.num_vars)
        for k, c in self.linear.items():
            lin[k] = c
        if self.quadratic:
            keys = np.array([(min(u, v), max(u, v)) for u, v in self.quadratic], dtype=np.int64)
            vals = np.fromiter(self.quadratic.values(), dtype=float, count=len(self.quadratic))
        else:
            keys = np.zeros((0, 2), dtype=np.int64)
            vals = np.zeros(0)
        return lin, keys[:, 0], keys[:, 1], vals

    @cached_property
    def neighbours(self):
        """Symmetric CSR adjacency ``(indptr, indices, data)``."""
        _, qi, qj, qv = self.arrays
        rows = np.concatenate([qi, qj])
        cols = np.concatenate([qj, qi])
        data = np.concatenate([qv, qv])
        order = np.lexsort((cols, rows))
        rows, cols, data = rows[order], cols[order], data[order]
        indptr = np.zeros(self.num_vars + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        return np.cumsum(indptr), cols.astype(np.int64), data

    @property
    def set_var_indices(self) -> list[int]:
        return [v.index for v in self.variables if v.kind == SET]

    def coefficient_range(self) -> tuple[float, float]:
        """(max |c|, min nonzero |c|) over linear and quadratic coefficients."""
        lin, _, _, qv = self.arrays
        mags = np.abs(np.concatenate([lin, qv]))
        mags = mags[mags > 0]
        if mags.size == 0:
            return 1.0, 1.0
        return float(mags.max()), float(mags.min())

    def to_text(self) -> str:
        lines = [f"{self.num_vars} {self.offset!r} {self.penalty_A!r} {self.penalty_B!r}"]
        lines += [f"{i} {c!r}" for i, c in sorted(self.linear.items())]
        lines += [f"{i} {j} {c!r}" for (i, j), c in sorted(self.quadratic.items())]
        return "\n".join(lines) + "\n"

    def save(self, path):
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "Qubo":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or len(rows[0]) != 4:
            raise ValueError("missing 'n_vars offset A B' header")
        n, offset, A, B = int(rows[0][0]), float(rows[0][1]), float(rows[0][2]), float(rows[0][3])
        linear, quadratic = {}, {}
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) == 2:
                linear[int(row[0])] = linear.get(int(row[0]), 0.0) + float(row[1])
            elif len(row) == 3:
                key = tuple(sorted((int(row[0]), int(row[1]))))
                quadratic[key] = quadratic.get(key, 0.0) + float(row[2])
            else:
                raise ValueError(f"line {lineno}: expected 2 or 3 fields, got {len(row)}")
        return cls(n, linear, quadratic, offset, A, B)

    @classmethod
    def load(cls, path) -> "Qubo":
        return cls.from_text(Path(path).read_text())


def build_qubo(
    family: SubsetFamily, A: float = 2.0, B: float = 1.0, worst_case_M: bool = False
) -> Qubo:
    """Compile ``family`` into a QUBO.

    With ``worst_case_M`` every element gets counting variables for
    ``m = 1..N`` (``N`` subsets), giving ``N + n*N`` variables in total.
    Otherwise element ``alpha`` gets ``m = 1..M_alpha`` where ``M_alpha`` is
    the number of subsets containing it; an element in no subset gets no
    counting variables and contributes the constant ``A``.
    """
    if not 0 < B < A:
        raise ValueError(f"penalties must satisfy 0 < B < A, got A={A}, B={B}")
    if len(family) == 0:
        raise ValueError("family has no subsets")
    N, n = len(family), family.universe_size

    variables = [Variable(SET, i, subset=i) for i in range(N)]
    covering = [[i for i, s in enumerate(family.subsets) if alpha in s.positions] for alpha in range(n)]

    linear = defaultdict(float)
    quadratic = defaultdict(float)
    offset = 0.0

    for i in range(N):
        linear[i] += B

    for alpha in range(n):
        sets = covering[alpha]
        M = N if worst_case_M else len(sets)
        if M == 0:
            offset += A
            continue
        counts = []
        for m in range(1, M + 1):
            counts.append((len(variables), m))
            variables.append(Variable(COUNT, len(variables), element=alpha, multiplicity=m))

        # (1 - sum y)^2 = 1 - sum y + 2 sum_{m<m'} y y'
        offset += A
        for k, (u, m) in enumerate(counts):
            linear[u] += -A + A * m * m
            for v, m2 in counts[k + 1:]:
                quadratic[(u, v)] += 2 * A + 2 * A * m * m2
        # (sum m y - sum x)^2, the y*y and y^2 parts folded in above
        for k, i in enumerate(sets):
            linear[i] += A
            for j in sets[k + 1:]:
                quadratic[(i, j)] += 2 * A
            for u, m in counts:
                quadratic[(i, u)] += -2 * A * m

    linear = {k: c for k, c in linear.items() if c != 0.0}
    return Qubo(len(variables), linear, dict(quadratic), offset, A, B, tuple(variables))


def energy(q: Qubo, assignment) -> float:
    x = np.asarray(assignment)
    if x.shape[-1] != q.num_vars:
        raise ValueError(f"assignment has {x.shape[-1]} entries, QUBO has {q.num_vars} variables")
    x = x.astype(float)
    lin, qi, qj, qv = q.arrays
    e = q.offset + x @ lin + (x[..., qi] * x[..., qj]) @ qv
    return float(e) if np.ndim(e) == 0 else e


@dataclass(frozen=True)
class CoverSolution:
    selected: tuple[PulledSubset, ...]
    selected_indices: tuple[int, ...]
    covered: frozenset[int]
    universe_size: int
    feasible: bool

    @property
    def coverage_fraction(self) -> float:
        return len(self.covered) / self.universe_size

    @property
    def num_selected(self) -> int:
        return len(self.selected)


def cover_from_indices(family: SubsetFamily, indices, feasible=None) -> CoverSolution:
    indices = tuple(indices)
    selected = tuple(family.subsets[i] for i in indices)
    covered = frozenset().union(*(s.positions for s in selected))
    if feasible is None:
        feasible = covered == family.universe
    return CoverSolution(selected, indices, covered, family.universe_size, feasible)


def decode(q: Qubo, assignment, family: SubsetFamily) -> CoverSolution:
    x = np.asarray(assignment).astype(int)
    if x.shape != (q.num_vars,):
        raise ValueError(f"assignment has shape {x.shape}, expected ({q.num_vars},)")
    if not q.variables:
        raise ValueError("QUBO has no variable registry; cannot decode")
    chosen = [v.subset for v in q.variables if v.kind == SET and x[v.index]]
    solution = cover_from_indices(family, chosen, feasible=False)

    consistent = True
    active = defaultdict(list)
    for v in q.variables:
        if v.kind == COUNT and x[v.index]:
            active[v.element].append(v.multiplicity)
    has_counts = {v.element for v in q.variables if v.kind == COUNT}
    for alpha in range(family.universe_size):
        times = sum(alpha in s.positions for s in solution.selected)
        if alpha in has_counts and active[alpha] != [times]:
            consistent = False
            break
    feasible = consistent and solution.covered == family.universe
    return CoverSolution(solution.selected, solution.selected_indices, solution.covered, family.universe_size, feasible)
