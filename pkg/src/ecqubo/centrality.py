"""Classical centrality measures used as the reference for the QUBO results."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DisconnectedGraphError, GraphError
from .graph import Graph, adjacency, is_connected

__all__ = [
    "CentralityVector",
    "WalkCentrality",
    "RelaxationResult",
    "TopTau",
    "eigencentrality",
    "degree_centrality",
    "matrix_exponential",
    "walk_centrality",
    "nelder_mead",
    "relaxation_objective",
    "penalty_relaxation",
    "top_tau",
    "tie_groups",
    "order_agrees",
    "derive_seed",
]


@dataclass(frozen=True)
class CentralityVector:
    scores: np.ndarray
    lambda1: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class WalkCentrality:
    gamma: float
    scores: np.ndarray


@dataclass(frozen=True)
class RelaxationResult:
    scores: np.ndarray
    raw: np.ndarray
    objective: float
    converged: bool
    evaluations: int


def derive_seed(master: int, k: int) -> int:
    """Child seed for the ``k``-th independent stream under ``master``."""
    return int(np.random.SeedSequence([int(master) & 0xFFFFFFFF, int(k)]).generate_state(1)[0])


def eigencentrality(g: Graph, tol: float = 1e-10, max_iter: int = 10000) -> CentralityVector:
    """Eigenvector centrality by power iteration.

    Iterates on ``A + I`` from the all-ones vector; the shift keeps
    bipartite graphs from oscillating without changing the eigenvectors.
    ``lambda1`` is the Rayleigh quotient on ``A`` itself. Iteration stops
    once ``max|A x - lambda1 x| <= tol``.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("eigenvector centrality needs a connected graph")
    a = adjacency(g)
    shifted = a + np.eye(g.n)
    x = np.ones(g.n) / math.sqrt(g.n)
    for it in range(1, max_iter + 1):
        x = shifted @ x
        x /= np.linalg.norm(x)
        ax = a @ x
        lam = float(x @ ax)
        residual = float(np.max(np.abs(ax - lam * x)))
        if residual <= tol:
            return CentralityVector(scores=x, lambda1=lam, iterations=it, residual=residual)
    raise ConvergenceError(
        f"power iteration did not reach residual {tol:g} in {max_iter} steps (last {residual:.3g})"
    )


def degree_centrality(g: Graph) -> np.ndarray:
    if g.n < 2:
        raise GraphError("degree centrality needs at least two nodes")
    return adjacency(g).sum(axis=1) / (g.n - 1)


def matrix_exponential(m, tol: float = 1e-12) -> np.ndarray:
    """``exp(m)`` by scaling and squaring around a truncated Taylor series.

    The matrix is scaled by ``2**-k`` until its 1-norm is at most 0.5, the
    series is summed until a term's 1-norm drops below ``tol`` (relative to
    the running sum), and the result is squared ``k`` times.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix_exponential needs a square matrix, got shape {m.shape}")
    norm = np.abs(m).sum(axis=0).max() if m.size else 0.0
    k = 0
    if norm > 0.5:
        k = int(math.ceil(math.log2(norm / 0.5)))
    scaled = m / (2.0 ** k)
    result = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    for j in range(1, 200):
        term = term @ scaled / j
        result += term
        if np.abs(term).sum(axis=0).max() < tol * max(1.0, np.abs(result).sum(axis=0).max()):
            break
    for _ in range(k):
        result = result @ result
    return result


def walk_centrality(g: Graph, gamma: float) -> WalkCentrality:
    """Walk-counting centrality ``c_i = (sum_j exp(gamma A)_ij - 1) / gamma``.

    Ranks like degree centrality as ``gamma -> 0`` and like eigenvector
    centrality as ``gamma`` grows.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    v = matrix_exponential(gamma * adjacency(g)).sum(axis=1)
    return WalkCentrality(gamma=float(gamma), scores=(v - 1.0) / gamma)


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0,
    ftol: float = 1e-10,
    max_evals: int | None = None,
    step: float = 0.05,
) -> tuple[np.ndarray, float, bool, int]:
    """Minimize ``f`` with the Nelder-Mead simplex method.

    Uses reflection 1, expansion 2, contraction 0.5 and shrink 0.5. Stops
    when the spread of function values over the simplex falls below
    ``ftol``; the search is then restarted from the best vertex and only
    accepted as converged when the restart cannot improve on it.

    Returns ``(x, fx, converged, evaluations)``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    if max_evals is None:
        max_evals = 2000 * n + 1000
    evals = 0

    def fe(x):
        nonlocal evals
        evals += 1
        return float(f(x))

    best_x, best_f = x0.copy(), fe(x0)
    converged = False
    while evals < max_evals:
        simplex = np.empty((n + 1, n))
        simplex[0] = best_x
        for i in range(n):
            v = best_x.copy()
            v[i] += step if v[i] == 0 else step * abs(v[i])
            simplex[i + 1] = v
        fv = np.array([best_f] + [fe(s) for s in simplex[1:]])
        spread_ok = False
        while evals < max_evals:
            order = np.argsort(fv, kind="stable")
            simplex, fv = simplex[order], fv[order]
            if fv[-1] - fv[0] < ftol:
                spread_ok = True
                break
            centroid = simplex[:-1].mean(axis=0)
            xr = centroid + (centroid - simplex[-1])
            fr = fe(xr)
            if fr < fv[0]:
                xe = centroid + 2.0 * (centroid - simplex[-1])
                fe_ = fe(xe)
                if fe_ < fr:
                    simplex[-1], fv[-1] = xe, fe_
                else:
                    simplex[-1], fv[-1] = xr, fr
            elif fr < fv[-2]:
                simplex[-1], fv[-1] = xr, fr
            else:
                if fr < fv[-1]:
                    xc = centroid + 0.5 * (xr - centroid)
                else:
                    xc = centroid + 0.5 * (simplex[-1] - centroid)
                fc = fe(xc)
                if fc < min(fr, fv[-1]):
                    simplex[-1], fv[-1] = xc, fc
                else:
                    simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
                    fv[1:] = [fe(s) for s in simplex[1:]]
        i = int(np.argmin(fv))
        improved = fv[i] < best_f - ftol
        if fv[i] < best_f:
            best_x, best_f = simplex[i].copy(), float(fv[i])
        if spread_ok and not improved:
            converged = True
            break
    return best_x, best_f, converged, evals


def relaxation_objective(a: np.ndarray, penalty: float) -> Callable[[np.ndarray], float]:
    """``f(x) = -x^T A x + P (sum x_i^2 - 1)^2``."""

    def f(x):
        s = float(x @ x) - 1.0
        return -float(x @ a @ x) + penalty * s * s

    return f


def penalty_relaxation(g: Graph, P: float = 10.0, restarts: int = 8, seed: int = 0) -> RelaxationResult:
    """Approximate eigenvector centrality from the penalised quadratic form.

    Runs :func:`nelder_mead` from ``restarts`` points drawn uniformly from
    ``[0, 1]^n`` and keeps the best. The sign is fixed so the components sum
    to a positive number. ``raw`` is the minimizer itself, whose norm is
    ``sqrt(1 + lambda1 / 2P)`` rather than 1; ``scores`` is ``raw`` scaled to
    unit length so it compares directly with :func:`eigencentrality`.
    """
    if not P > 0:
        raise ValueError(f"penalty must be positive, got {P}")
    if restarts < 1:
        raise ValueError("need at least one restart")
    f = relaxation_objective(adjacency(g), P)
    best = None
    total_evals = 0
    for k in range(restarts):
        rng = np.random.default_rng(derive_seed(seed, k))
        x, fx, ok, evals = nelder_mead(f, rng.random(g.n))
        total_evals += evals
        if best is None or fx < best[1]:
            best = (x, fx, ok)
    x, fx, ok = best
    if x.sum() < 0:
        x = -x
    norm = np.linalg.norm(x)
    scores = x / norm if norm > 0 else x
    return RelaxationResult(scores=scores, raw=x, objective=fx, converged=ok, evaluations=total_evals)


# --------------------------------------------------------------------------
# tie-aware selections


@dataclass(frozen=True)
class TopTau:
    """The ``tau`` best-scoring nodes plus the boundary tie group.

    ``strict`` holds nodes that beat the boundary score outright; the rest
    of ``nodes`` was taken (lowest ids first) from ``tie_group``, any member
    of which would be an equally valid choice.
    """

    tau: int
    nodes: frozenset[int]
    strict: frozenset[int]
    tie_group: frozenset[int]

    @property
    def is_tied(self) -> bool:
        return len(self.strict) + len(self.tie_group) > self.tau

    def accepts(self, candidate) -> bool:
        candidate = frozenset(candidate)
        return (
            len(candidate) == self.tau
            and self.strict <= candidate
            and candidate - self.strict <= self.tie_group
        )


def _order(scores: np.ndarray) -> list[int]:
    return sorted(range(len(scores)), key=lambda i: (-scores[i], i))


def top_tau(scores: Sequence[float], tau: int, tie_tol: float = 1e-6) -> TopTau:
    scores = np.asarray(scores, dtype=float)
    n = len(scores)
    if not 1 <= tau <= n:
        raise ValueError(f"tau must lie in [1, {n}], got {tau}")
    order = _order(scores)
    boundary = scores[order[tau - 1]]
    strict = frozenset(i for i in range(n) if scores[i] > boundary + tie_tol)
    group = frozenset(i for i in range(n) if abs(scores[i] - boundary) <= tie_tol)
    fill = sorted(group)[: tau - len(strict)]
    return TopTau(tau=tau, nodes=strict | frozenset(fill), strict=strict, tie_group=group)


def tie_groups(scores: Sequence[float], tie_tol: float = 1e-6) -> list[list[int]]:
    """Nodes sorted by descending score, grouped where scores agree within
    ``tie_tol`` of the group's leading score."""
    scores = np.asarray(scores, dtype=float)
    groups: list[list[int]] = []
    head = None
    for i in _order(scores):
        if head is None or scores[i] < head - tie_tol:
            groups.append([i])
            head = scores[i]
        else:
            groups[-1].append(i)
    return groups


def order_agrees(values: Sequence[float], reference: Sequence[float], tie_tol: float = 1e-6) -> bool:
    """True when ``values`` orders every pair the reference separates by more
    than ``tie_tol`` the same way (strictly)."""
    v = np.asarray(values, dtype=float)
    r = np.asarray(reference, dtype=float)
    above = r[:, None] > r[None, :] + tie_tol
    return bool(np.all((v[:, None] > v[None, :])[above]))
