"""QUBO minimizers: simulated annealing, exhaustive enumeration, greedy set cover."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numba
import numpy as np

from tsqubo.pulling import SubsetFamily
from tsqubo.qubo import CoverSolution, Qubo, cover_from_indices, energy

EXHAUSTIVE_MAX_VARS = 25


@dataclass(frozen=True)
class AnnealParams:
    num_reads: int = 2000
    num_sweeps: int = 1000
    beta_initial: float | None = None
    beta_final: float | None = None
    interpolation: str = "geometric"
    seed: int = 0

    def __post_init__(self):
        if self.num_reads < 1 or self.num_sweeps < 1:
            raise ValueError("num_reads and num_sweeps must be >= 1")
        if self.interpolation not in ("geometric", "linear"):
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        if (self.beta_initial is None) != (self.beta_final is None):
            raise ValueError("set both beta_initial and beta_final, or neither")
        if self.beta_initial is not None and not 0 < self.beta_initial < self.beta_final:
            raise ValueError("need 0 < beta_initial < beta_final")

    def betas(self, q: Qubo) -> np.ndarray:
        """Per-sweep inverse temperatures.

        Unset endpoints self-scale to the QUBO: ``1/max|c|`` to ``10/min|c|``.
        """
        b0, b1 = self.beta_initial, self.beta_final
        if b0 is None:
            cmax, cmin = q.coefficient_range()
            b0, b1 = 1.0 / cmax, 10.0 / cmin
        if self.interpolation == "geometric":
            return np.geomspace(b0, b1, self.num_sweeps)
        return np.linspace(b0, b1, self.num_sweeps)


@dataclass(frozen=True, eq=False)
class Sample:
    assignment: np.ndarray
    energy: float
    multiplicity: int = 1

    @property
    def hex(self) -> str:
        return assignment_hex(self.assignment)


@dataclass(frozen=True, eq=False)
class SolveResult:
    samples: tuple[Sample, ...]
    params_used: AnnealParams | None = None
    info: dict = field(default_factory=dict)

    @property
    def best(self) -> Sample:
        return self.samples[0]

    def ground_states(self, tol: float = 1e-9) -> list[Sample]:
        e0 = self.best.energy
        return [s for s in self.samples if s.energy <= e0 + tol]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("assignment_hex,energy,multiplicity\n")
        for s in self.samples:
            buf.write(f"{s.hex},{s.energy!r},{s.multiplicity}\n")
        return buf.getvalue()


def assignment_hex(x) -> str:
    """Bits packed most-significant first, variable 0 in the top bit, zero-padded."""
    return np.packbits(np.asarray(x, dtype=np.uint8)).tobytes().hex()


def _aggregate(q: Qubo, states: np.ndarray, params=None, info=None) -> SolveResult:
    energies = energy(q, states) if states.size else np.full(len(states), q.offset)
    energies = np.atleast_1d(energies)
    groups = {}
    for row, e in zip(states, energies):
        key = np.packbits(row).tobytes()
        if key in groups:
            groups[key][2] += 1
        else:
            groups[key] = [row.copy(), float(e), 1]
    ordered = sorted(groups.items(), key=lambda kv: (kv[1][1], kv[0]))
    samples = tuple(Sample(row, e, m) for _, (row, e, m) in ordered)
    return SolveResult(samples, params, info or {})


# splitmix64; all arithmetic stays in uint64
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@numba.njit(cache=True, inline="always")
def _next_uniform(state):
    s = state + _GOLDEN
    z = s
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return s, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@numba.njit(cache=True, parallel=True)
def _metropolis_reads(lin, indptr, indices, data, betas, seeds):
    n = lin.shape[0]
    reads = seeds.shape[0]
    out = np.zeros((reads, n), dtype=np.uint8)
    for r in numba.prange(reads):
        state = seeds[r]
        x = np.zeros(n, dtype=np.uint8)
        for i in range(n):
            state, u = _next_uniform(state)
            if u < 0.5:
                x[i] = 1
        field = lin.copy()
        for i in range(n):
            if x[i]:
                for k in range(indptr[i], indptr[i + 1]):
                    field[indices[k]] += data[k]
        for t in range(betas.shape[0]):
            beta = betas[t]
            for i in range(n):
                delta = field[i] if x[i] == 0 else -field[i]
                accept = delta <= 0.0
                if not accept:
                    state, u = _next_uniform(state)
                    accept = u < np.exp(-beta * delta)
                if accept:
                    sign = 1.0 if x[i] == 0 else -1.0
                    x[i] = 1 - x[i]
                    for k in range(indptr[i], indptr[i + 1]):
                        field[indices[k]] += sign * data[k]
        out[r] = x
    return out


def _read_seeds(seed: int, num_reads: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(num_reads, dtype=np.uint64)


def _run_chains(q: Qubo, betas: np.ndarray, num_reads: int, seed: int) -> np.ndarray:
    lin, _, _, _ = q.arrays
    indptr, indices, data = q.neighbours
    return _metropolis_reads(
        lin, indptr, indices, data, np.ascontiguousarray(betas, dtype=float), _read_seeds(seed, num_reads)
    )


def anneal(q: Qubo, params: AnnealParams | None = None) -> SolveResult:
    """Single-flip Metropolis annealing; each read starts from a uniform random state.

    Reads draw from independent splitmix64 streams seeded by
    ``SeedSequence(params.seed)``, so results do not depend on thread count.
    """
    params = params or AnnealParams()
    betas = params.betas(q)
    states = _run_chains(q, betas, params.num_reads, params.seed)
    return _aggregate(q, states, params, {"beta_initial": float(betas[0]), "beta_final": float(betas[-1])})


def metropolis_sample(q: Qubo, beta: float, num_reads: int, num_sweeps: int, seed: int = 0) -> SolveResult:
    """Fixed-temperature Metropolis chains; final states approximate the Boltzmann law."""
    states = _run_chains(q, np.full(num_sweeps, float(beta)), num_reads, seed)
    return _aggregate(q, states, None, {"beta": beta})


@numba.njit(cache=True)
def _gray_scan(lin, indptr, indices, data, tol):
    n = lin.shape[0]
    field = lin.copy()
    x = np.zeros(n, dtype=np.uint8)
    e = 0.0
    best = 0.0
    cap = 4096
    found = np.zeros(cap, dtype=np.int64)
    nfound = 1
    code = 0
    total = np.int64(1) << n
    for k in range(1, total):
        i = 0
        while not (k >> i) & 1:
            i += 1
        if x[i] == 0:
            e += field[i]
            sign = 1.0
        else:
            e -= field[i]
            sign = -1.0
        x[i] = 1 - x[i]
        code ^= np.int64(1) << i
        for kk in range(indptr[i], indptr[i + 1]):
            field[indices[kk]] += sign * data[kk]
        if e < best - tol:
            best = e
            found[0] = code
            nfound = 1
        elif e <= best + tol:
            if nfound < cap:
                found[nfound] = code
            nfound += 1
    return best, found[: min(nfound, cap)], nfound


def _bits(codes, n) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def exhaustive(q: Qubo, pivots=None, spectrum: bool = False) -> SolveResult:
    """Exact minimization by enumeration.

    Without ``pivots`` all ``2**n`` assignments are scanned (``n <= 25``);
    ``spectrum=True`` returns every assignment instead of only ground states.
    With ``pivots`` the pivot variables are enumerated and each connected
    component of the remaining interaction graph is minimized independently,
    which is exact and lets structured QUBOs well beyond 25 variables be
    solved (see :func:`exhaustive_conditioned`).

    ``info["degeneracy"]`` holds the number of ground states.
    """
    if pivots is not None:
        return exhaustive_conditioned(q, pivots)
    n = q.num_vars
    if n > EXHAUSTIVE_MAX_VARS:
        raise ValueError(f"{n} variables exceeds the exhaustive guard of {EXHAUSTIVE_MAX_VARS}")
    if n == 0:
        return SolveResult((Sample(np.zeros(0, dtype=np.uint8), q.offset, 1),), info={"degeneracy": 1})
    if spectrum:
        states = _bits(np.arange(1 << n), n)
        energies = energy(q, states)
        order = np.lexsort((np.arange(1 << n), energies))
        e0 = energies[order[0]]
        deg = int(np.sum(energies <= e0 + 1e-9))
        return SolveResult(
            tuple(Sample(states[k], float(energies[k])) for k in order), info={"degeneracy": deg}
        )
    lin, _, _, _ = q.arrays
    indptr, indices, data = q.neighbours
    _, codes, nfound = _gray_scan(lin, indptr, indices, data, 1e-7)
    states = _bits(codes, n)
    energies = np.atleast_1d(energy(q, states))
    e0 = energies.min()
    keep = energies <= e0 + 1e-9
    result = _aggregate(q, states[keep])
    result.info["degeneracy"] = int(keep.sum()) if nfound <= len(codes) else int(nfound)
    return result


def _components(n, nodes, qi, qj):
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in zip(qi, qj):
        if u in parent and v in parent:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    groups = {}
    for v in nodes:
        groups.setdefault(find(v), []).append(v)
    return [sorted(g) for _, g in sorted(groups.items())]


def exhaustive_conditioned(q: Qubo, pivots, max_block: int = 20) -> SolveResult:
    """Exact minimum via enumeration of ``pivots`` plus independent free blocks.

    Once the pivot variables are fixed, the energy splits into a sum over the
    connected components of the non-pivot variables, so each component is
    enumerated on its own. Both the pivot set and every component are capped
    at ``max_block`` variables.
    """
    n = q.num_vars
    pivots = sorted(set(int(p) for p in pivots))
    if len(pivots) > max_block:
        raise ValueError(f"{len(pivots)} pivots exceeds the block guard of {max_block}")
    lin, qi, qj, qv = q.arrays
    pivot_set = set(pivots)
    rest = [v for v in range(n) if v not in pivot_set]
    comps = _components(n, rest, qi.tolist(), qj.tolist())
    if any(len(c) > max_block for c in comps):
        raise ValueError(f"a free component exceeds the block guard of {max_block}")

    p = len(pivots)
    where = np.full(n, -1)
    where[pivots] = np.arange(p)
    X = _bits(np.arange(1 << p), p).astype(float)

    # pivot-only energy
    mask_pp = (where[qi] >= 0) & (where[qj] >= 0)
    total = q.offset + X @ lin[pivots]
    if mask_pp.any():
        total = total + (X[:, where[qi[mask_pp]]] * X[:, where[qj[mask_pp]]]) @ qv[mask_pp]

    comp_argmin = []
    comp_ties = []
    for comp in comps:
        k = len(comp)
        local = np.full(n, -1)
        local[comp] = np.arange(k)
        Y = _bits(np.arange(1 << k), k).astype(float)
        inner = (local[qi] >= 0) & (local[qj] >= 0)
        e_int = Y @ lin[comp]
        if inner.any():
            e_int = e_int + (Y[:, local[qi[inner]]] * Y[:, local[qj[inner]]]) @ qv[inner]
        W = np.zeros((p, k))
        cross_a = (where[qi] >= 0) & (local[qj] >= 0)
        cross_b = (local[qi] >= 0) & (where[qj] >= 0)
        np.add.at(W, (where[qi[cross_a]], local[qj[cross_a]]), qv[cross_a])
        np.add.at(W, (where[qj[cross_b]], local[qi[cross_b]]), qv[cross_b])
        block = e_int[None, :] + (X @ W) @ Y.T
        mins = block.min(axis=1)
        total = total + mins
        comp_argmin.append(block.argmin(axis=1))
        comp_ties.append(np.sum(block <= mins[:, None] + 1e-9, axis=1))

    e0 = total.min()
    winners = np.flatnonzero(total <= e0 + 1e-9)
    states = np.zeros((len(winners), n), dtype=np.uint8)
    degeneracy = 0
    for row, w in enumerate(winners):
        states[row, pivots] = X[w].astype(np.uint8)
        mult = 1
        for comp, arg, ties in zip(comps, comp_argmin, comp_ties):
            states[row, comp] = _bits([arg[w]], len(comp))[0]
            mult *= int(ties[w])
        degeneracy += mult
    result = _aggregate(q, states)
    result.info["degeneracy"] = degeneracy
    return result


def greedy_cover(family: SubsetFamily) -> CoverSolution:
    """Classic greedy set cover; ties go to the lowest subset index."""
    if len(family) == 0:
        raise ValueError("empty family")
    uncovered = set(family.coverable())
    chosen = []
    while uncovered:
        gains = [len(s.positions & uncovered) for s in family.subsets]
        best = max(range(len(gains)), key=lambda i: (gains[i], -i))
        if gains[best] == 0:
            break
        chosen.append(best)
        uncovered -= family.subsets[best].positions
    return cover_from_indices(family, chosen)
