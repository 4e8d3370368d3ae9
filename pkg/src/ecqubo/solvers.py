"""Ground-state search for QUBO instances.

Two exact enumerators (all ``2^n`` bitstrings, or only those of a fixed
Hamming weight) and a seeded simulated-annealing sampler.
"""

from __future__ import annotations

import itertools
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from numba import njit, prange

from .centrality import derive_seed
from .errors import CapacityError
from .qubo import QuboMatrix, qubo_energies, to_ising

__all__ = [
    "Sample",
    "SampleSet",
    "solve_exhaustive",
    "solve_fixed_weight",
    "solve_sa",
    "default_beta_range",
    "ground_nodes",
    "MAX_EXHAUSTIVE_N",
    "MAX_COMBINATIONS",
]

MAX_EXHAUSTIVE_N = 24
MAX_COMBINATIONS = 10**7
DEGENERACY_TOL = 1e-9
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Sample:
    bits: tuple[int, ...]
    energy: float
    count: int = 1

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(i for i, b in enumerate(self.bits) if b)

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class SampleSet:
    samples: tuple[Sample, ...]
    meta: dict = field(default_factory=dict)
    degeneracy_tol: float = DEGENERACY_TOL

    @classmethod
    def build(cls, samples: Iterable[Sample], meta: dict, degeneracy_tol: float = DEGENERACY_TOL) -> "SampleSet":
        """Sort by energy level, then lexicographically by bitstring.

        Energies within ``degeneracy_tol`` of a level's lowest member share
        that level, so float noise never reorders degenerate states.
        """
        by_energy = sorted(samples, key=lambda s: (s.energy, s.bits))
        keyed = []
        level, head = -1, None
        for s in by_energy:
            if head is None or s.energy > head + degeneracy_tol:
                level += 1
                head = s.energy
            keyed.append((level, s.bits, s))
        keyed.sort(key=lambda t: (t[0], t[1]))
        return cls(tuple(t[2] for t in keyed), meta, degeneracy_tol)

    def __len__(self):
        return len(self.samples)

    @property
    def ground_energy(self) -> float:
        if not self.samples:
            raise ValueError("empty sample set")
        return self.samples[0].energy

    def ground_states(self) -> list[Sample]:
        e0 = self.ground_energy
        return [s for s in self.samples if s.energy <= e0 + self.degeneracy_tol]

    @property
    def degeneracy(self) -> int:
        return len(self.ground_states())

    @property
    def total_count(self) -> int:
        return sum(s.count for s in self.samples)


def ground_nodes(s: SampleSet) -> list[frozenset[int]]:
    """Node sets (indices of the 1 bits) of every degenerate ground state,
    ordered by their sorted member lists."""
    if not s.samples:
        raise ValueError("empty sample set")
    return sorted((g.nodes for g in s.ground_states()), key=sorted)


def _levels(energies: np.ndarray, tol: float, count: int) -> list[float]:
    """Lowest ``count`` distinct energy levels (level heads)."""
    heads = []
    floor = -np.inf
    for _ in range(count):
        rest = energies[energies > floor]
        if rest.size == 0:
            break
        e = float(rest.min())
        heads.append(e)
        floor = e + tol
    return heads


def _select(energies: np.ndarray, heads: list[float], tol: float, max_excited: int) -> np.ndarray:
    if not heads:
        return np.array([], dtype=np.int64)
    ground = np.flatnonzero(energies <= heads[0] + tol)
    if len(heads) == 1:
        return ground
    excited = np.flatnonzero((energies > heads[0] + tol) & (energies <= heads[-1] + tol))
    excited = excited[np.argsort(energies[excited], kind="stable")][:max_excited]
    return np.concatenate([ground, np.sort(excited)])


def solve_exhaustive(q: QuboMatrix, degeneracy_tol: float = DEGENERACY_TOL,
                     excited_levels: int = 10, max_excited: int = 1024) -> SampleSet:
    """Enumerate all ``2^n`` bitstrings.

    Returns every ground state plus states from the next ``excited_levels``
    distinct energy levels (at most ``max_excited`` of them). Bit ``i`` of
    the enumeration index is ``x_i``.
    """
    n = q.n
    if n > MAX_EXHAUSTIVE_N:
        raise CapacityError(f"exhaustive search is limited to n <= {MAX_EXHAUSTIVE_N}, got n={n}")
    t0 = time.perf_counter()
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    energies = np.empty(total)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (idx[:, None] >> shifts) & 1
        energies[start:start + len(idx)] = qubo_energies(q, bits)
    heads = _levels(energies, degeneracy_tol, excited_levels + 1)
    chosen = _select(energies, heads, degeneracy_tol, max_excited)
    bits = ((chosen[:, None] >> shifts) & 1).astype(int)
    samples = [Sample(tuple(int(b) for b in row), float(e)) for row, e in zip(bits, energies[chosen])]
    meta = {
        "method": "exhaustive",
        "states": total,
        "levels": heads,
        "runtime": time.perf_counter() - t0,
    }
    return SampleSet.build(samples, meta, degeneracy_tol)


def _combination_chunks(n: int, tau: int):
    it = itertools.combinations(range(n), tau)
    while True:
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, _CHUNK)), dtype=np.int64)
        if flat.size == 0:
            return
        yield flat.reshape(-1, tau)


def solve_fixed_weight(q: QuboMatrix, tau: int, degeneracy_tol: float = DEGENERACY_TOL,
                       excited_levels: int = 10, max_excited: int = 1024) -> SampleSet:
    """Exact minimum over bitstrings with exactly ``tau`` ones."""
    n = q.n
    if not 1 <= tau <= n:
        raise ValueError(f"tau must lie in [1, {n}], got {tau}")
    count = math.comb(n, tau)
    if count > MAX_COMBINATIONS:
        raise CapacityError(f"C({n}, {tau}) = {count} exceeds the enumeration limit {MAX_COMBINATIONS}")
    t0 = time.perf_counter()
    qm = q.q
    energies = np.empty(count)
    pos = 0
    for combo in _combination_chunks(n, tau):
        energies[pos:pos + len(combo)] = qm[combo[:, :, None], combo[:, None, :]].sum(axis=(1, 2))
        pos += len(combo)
    heads = _levels(energies, degeneracy_tol, excited_levels + 1)
    chosen = _select(energies, heads, degeneracy_tol, max_excited)
    wanted = set(chosen.tolist())
    last = max(wanted) if wanted else -1
    samples = []
    for k, combo in enumerate(itertools.combinations(range(n), tau)):
        if k > last:
            break
        if k in wanted:
            bits = [0] * n
            for i in combo:
                bits[i] = 1
            samples.append(Sample(tuple(bits), float(energies[k])))
    meta = {
        "method": "fixed-weight",
        "tau": tau,
        "states": count,
        "levels": heads,
        "runtime": time.perf_counter() - t0,
    }
    return SampleSet.build(samples, meta, degeneracy_tol)


# --------------------------------------------------------------------------
# simulated annealing


@njit(cache=True, parallel=True)
def _anneal(h, jm, betas, seeds):
    reads = seeds.shape[0]
    n = h.shape[0]
    out = np.empty((reads, n), dtype=np.int8)
    for r in prange(reads):
        np.random.seed(seeds[r])
        s = np.empty(n)
        for i in range(n):
            s[i] = 1.0 if np.random.random() < 0.5 else -1.0
        field = np.empty(n)
        for i in range(n):
            acc = h[i]
            for k in range(n):
                acc += jm[i, k] * s[k]
            field[i] = acc
        for beta in betas:
            for i in range(n):
                de = -2.0 * s[i] * field[i]
                if de <= 0.0 or np.random.random() < math.exp(-beta * de):
                    delta = -2.0 * s[i]
                    s[i] = -s[i]
                    for k in range(n):
                        field[k] += jm[k, i] * delta
        for i in range(n):
            out[r, i] = 1 if s[i] > 0 else 0
    return out


def default_beta_range(h: np.ndarray, jm: np.ndarray, reads: int) -> tuple[float, float]:
    """Inverse-temperature endpoints from bounds on single-flip ``|dE|``.

    Hot end: flipping the most strongly coupled spin is accepted with
    probability 1/2. Cold end: a flip costing the smallest nonzero
    coefficient is accepted about once per ``100 * reads`` attempts.
    """
    bounds = 2.0 * (np.abs(h) + np.abs(jm).sum(axis=1))
    max_de = float(bounds.max())
    coeffs = np.concatenate([np.abs(h), np.abs(jm[np.triu_indices_from(jm, 1)])])
    coeffs = coeffs[coeffs > 0]
    if max_de == 0 or coeffs.size == 0:
        return 1.0, 1.0
    min_de = 2.0 * float(coeffs.min())
    beta_min = math.log(2.0) / max_de
    beta_max = math.log(100.0 * reads) / min_de
    return beta_min, max(beta_max, beta_min)


def solve_sa(q: QuboMatrix, reads: int = 1000, sweeps: int = 1000,
             beta_range: tuple[float, float] | None = None, seed: int = 0,
             degeneracy_tol: float = DEGENERACY_TOL) -> SampleSet:
    """Metropolis simulated annealing on the Ising form of ``q``.

    Each read starts from random spins and performs ``sweeps`` single-spin
    sweeps along a geometric inverse-temperature ladder. Read ``r`` draws
    from its own stream seeded by ``derive_seed(seed, r)``, so the result
    does not depend on how reads are scheduled across threads.
    """
    if reads < 1 or sweeps < 1:
        raise ValueError("reads and sweeps must be at least 1")
    t0 = time.perf_counter()
    model = to_ising(q)
    h = np.ascontiguousarray(model.h, dtype=float)
    jm = np.ascontiguousarray(model.coupling_matrix())
    if beta_range is None:
        beta_range = default_beta_range(h, jm, reads)
    b0, b1 = beta_range
    betas = np.geomspace(b0, b1, sweeps) if b0 > 0 and b1 > 0 else np.linspace(b0, b1, sweeps)
    seeds = np.array([derive_seed(seed, r) for r in range(reads)], dtype=np.int64)
    with warnings.catch_warnings():
        # numba probes TBB first and warns when the installed version is old
        warnings.filterwarnings("ignore", message="The TBB threading layer")
        states = _anneal(h, jm, betas, seeds)
    uniq, counts = np.unique(states, axis=0, return_counts=True)
    energies = qubo_energies(q, uniq)
    samples = [Sample(tuple(int(b) for b in row), float(e), int(c))
               for row, e, c in zip(uniq, energies, counts)]
    meta = {
        "method": "sa",
        "reads": reads,
        "sweeps": sweeps,
        "seed": seed,
        "beta_range": [float(b0), float(b1)],
        "runtime": time.perf_counter() - t0,
    }
    return SampleSet.build(samples, meta, degeneracy_tol)
