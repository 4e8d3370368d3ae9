"""QUBO construction for selecting the ``tau`` most central nodes.

The main builder returns

    Q = -P0 (A^2 d̂)(A d̂)^T - P0 (A d̂)(A^2 d̂)^T + P1 C,    C = (1 - 2 tau) I + U

where ``d̂`` is the unit degree vector and ``U`` is all-ones off the
diagonal. ``x^T C x + tau^2 = (sum x - tau)^2`` on binary ``x``, so ``C``
penalises selections of the wrong size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DisconnectedGraphError, GraphError
from .graph import Graph, adjacency, degrees, is_connected

__all__ = [
    "QuboMatrix",
    "IsingModel",
    "constraint_matrix",
    "build_ec_qubo",
    "build_naive_qubo",
    "default_penalties",
    "qubo_energy",
    "qubo_energies",
    "to_ising",
    "ising_energy",
    "write_qubo",
    "read_qubo",
]


@dataclass(frozen=True)
class QuboMatrix:
    q: np.ndarray
    meta: Mapping[str, object] = field(default_factory=lambda: {"kind": "custom"})

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"QUBO matrix must be square, got shape {q.shape}")
        if not np.allclose(q, q.T, rtol=0, atol=1e-12):
            raise ValueError("QUBO matrix must be symmetric")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def tau(self):
        return self.meta.get("tau")


@dataclass(frozen=True)
class IsingModel:
    h: np.ndarray
    j: Mapping[tuple[int, int], float]
    offset: float

    @property
    def n(self) -> int:
        return len(self.h)

    def coupling_matrix(self) -> np.ndarray:
        """Symmetric matrix with ``J_ij`` in both triangles, zero diagonal."""
        jm = np.zeros((self.n, self.n))
        for (a, b), v in self.j.items():
            jm[a, b] = jm[b, a] = v
        return jm


def default_penalties(n: int) -> tuple[float, float]:
    """``(P0, P1) = (1/sqrt(n), 5n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return 1.0 / math.sqrt(n), 5.0 * n


def constraint_matrix(n: int, tau: int) -> np.ndarray:
    if not 1 <= tau <= n:
        raise ValueError(f"tau must lie in [1, {n}], got {tau}")
    c = np.ones((n, n))
    np.fill_diagonal(c, 1 - 2 * tau)
    return c


def build_ec_qubo(g: Graph, tau: int, p0: float | None = None, p1: float | None = None) -> QuboMatrix:
    """EC-QUBO for the top-``tau`` node selection on ``g``.

    Penalties default to :func:`default_penalties`. The reward term is the
    rank-2 sum ``M + M^T`` with ``M = (A^2 d̂)(A d̂)^T``, so ``Q`` is symmetric
    by construction.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("EC-QUBO needs a connected graph")
    if not g.edges:
        raise GraphError("EC-QUBO needs at least one edge")
    dp0, dp1 = default_penalties(g.n)
    p0 = dp0 if p0 is None else float(p0)
    p1 = dp1 if p1 is None else float(p1)
    if not (p1 > p0 > 0):
        raise ValueError(f"penalties must satisfy P1 > P0 > 0, got P0={p0}, P1={p1}")
    a = adjacency(g)
    dhat = degrees(g).dhat
    walk1 = a @ dhat
    walk2 = a @ walk1
    m = np.outer(walk2, walk1)
    q = -p0 * (m + m.T) + p1 * constraint_matrix(g.n, tau)
    return QuboMatrix(q, {"kind": "ec", "tau": int(tau), "p0": p0, "p1": p1})


def build_naive_qubo(g: Graph) -> QuboMatrix:
    """``(A - d_max I)^2`` expanded: ``A^2 - 2 d_max A + d_max^2 I``.

    This is the squared eigen-residual with the leading eigenvalue replaced
    by the maximum degree; the correction for that substitution is dropped.
    Its ground state does not identify the most central node and it is kept
    for diagnostics only.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("naive QUBO needs a connected graph")
    a = adjacency(g)
    d_max = float(a.sum(axis=1).max())
    q = a @ a - 2.0 * d_max * a + d_max ** 2 * np.eye(g.n)
    return QuboMatrix(q, {"kind": "naive"})


def _as_matrix(q) -> np.ndarray:
    return q.q if isinstance(q, QuboMatrix) else np.asarray(q, dtype=float)


def qubo_energy(q, x: Sequence[int]) -> float:
    qm = _as_matrix(q)
    x = np.asarray(x, dtype=float)
    if x.shape != (qm.shape[0],):
        raise ValueError(f"bitstring length {x.size} does not match QUBO size {qm.shape[0]}")
    return float(x @ qm @ x)


def qubo_energies(q, xs) -> np.ndarray:
    """Energies of the rows of ``xs`` (shape ``(k, n)``)."""
    qm = _as_matrix(q)
    xs = np.asarray(xs, dtype=float)
    return np.einsum("ki,ij,kj->k", xs, qm, xs)


def to_ising(q) -> IsingModel:
    """Spin form with ``E_qubo(x) = E_ising(2x - 1) + offset``."""
    qm = _as_matrix(q)
    n = qm.shape[0]
    diag = np.diag(qm).copy()
    off = qm - np.diag(diag)
    h = diag / 2.0 + off.sum(axis=1) / 2.0
    j = {(a, b): float(qm[a, b] / 2.0) for a in range(n) for b in range(a + 1, n) if qm[a, b] != 0}
    offset = float(off.sum() / 4.0 + diag.sum() / 2.0)
    return IsingModel(h=h, j=j, offset=offset)


def ising_energy(model: IsingModel, s: Sequence[int]) -> float:
    """``sum_i h_i s_i + sum_{i<j} J_ij s_i s_j`` (offset excluded)."""
    s = np.asarray(s, dtype=float)
    e = float(model.h @ s)
    for (a, b), v in model.j.items():
        e += v * s[a] * s[b]
    return e


# --------------------------------------------------------------------------
# text format
#
#   c <comment>
#   p qubo 0 <n> <nDiagonal> <nOffDiagonal>
#   i i <Q_ii>              one per nonzero diagonal entry
#   i j <Q_ij + Q_ji>       one per nonzero coupler, i < j


def write_qubo(q: QuboMatrix, comments: Sequence[str] = ()) -> str:
    qm = q.q
    n = q.n
    diag = [(i, qm[i, i]) for i in range(n) if qm[i, i] != 0]
    couplers = [(a, b, qm[a, b] + qm[b, a]) for a in range(n) for b in range(a + 1, n)
                if qm[a, b] + qm[b, a] != 0]
    lines = ["c format-version 1"]
    meta = q.meta
    if meta.get("kind") == "ec":
        lines.append(f"c kind=ec tau={meta['tau']} p0={meta['p0']:.17g} p1={meta['p1']:.17g}")
    lines += [f"c {c}" for c in comments]
    lines.append(f"p qubo 0 {n} {len(diag)} {len(couplers)}")
    lines += [f"{i} {i} {v:.17g}" for i, v in diag]
    lines += [f"{a} {b} {v:.17g}" for a, b, v in couplers]
    return "\n".join(lines) + "\n"


def read_qubo(text: str) -> QuboMatrix:
    header = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 6 or parts[1] != "qubo":
                raise ValueError(f"line {lineno}: malformed header {raw!r}")
            header = tuple(int(p) for p in parts[2:])
            continue
        if header is None:
            raise ValueError(f"line {lineno}: entry before 'p qubo' header")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'i j value', got {raw!r}")
        entries.append((int(parts[0]), int(parts[1]), float(parts[2]), lineno))
    if header is None:
        raise ValueError("missing 'p qubo' header")
    _, n, n_diag, n_off = header
    q = np.zeros((n, n))
    seen_diag = seen_off = 0
    for a, b, v, lineno in entries:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"line {lineno}: index out of range for n={n}")
        if a == b:
            q[a, a] = v
            seen_diag += 1
        else:
            q[a, b] = q[b, a] = v / 2.0
            seen_off += 1
    if (seen_diag, seen_off) != (n_diag, n_off):
        raise ValueError(
            f"header announces {n_diag} diagonal / {n_off} coupler lines, found {seen_diag} / {seen_off}"
        )
    return QuboMatrix(q)
