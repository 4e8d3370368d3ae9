"""Node hierarchies from tau-sweeps of the EC-QUBO.

Solving for tau = 1..n gives a family of top-tau sets; the node that enters
at tau = r gets rank r. Degenerate ground states are resolved by choosing,
at each tau, the lexicographically smallest ground set that contains the
previous choice.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .centrality import tie_groups
from .errors import CapacityError
from .graph import Graph
from .qubo import build_ec_qubo
from .solvers import (
    MAX_COMBINATIONS,
    MAX_EXHAUSTIVE_N,
    SampleSet,
    ground_nodes,
    solve_exhaustive,
    solve_fixed_weight,
    solve_sa,
)

__all__ = [
    "TauRecord",
    "TauSweep",
    "RankEntry",
    "RankReport",
    "RankAgreement",
    "make_solver",
    "tau_sweep",
    "rank_from_sweep",
    "compare_rankings",
]


@dataclass(frozen=True)
class TauRecord:
    tau: int
    node_sets: tuple[tuple[int, ...], ...]
    solver_meta: dict = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return len(self.node_sets) > 1

    @property
    def weight_ok(self) -> bool:
        return all(len(s) == self.tau for s in self.node_sets)


@dataclass(frozen=True)
class TauSweep:
    graph: str
    n: int
    records: tuple[TauRecord, ...]

    def record(self, tau: int) -> TauRecord:
        for r in self.records:
            if r.tau == tau:
                return r
        raise KeyError(f"no record for tau={tau}")

    def weight_violations(self) -> list[int]:
        return [r.tau for r in self.records if not r.weight_ok]


def make_solver(method: str = "exhaustive", **params) -> Callable[[object, int], SampleSet]:
    """Return ``solve(q, tau) -> SampleSet`` for one of the three solvers."""
    if method == "exhaustive":
        return lambda q, tau: solve_exhaustive(q)
    if method == "fixed-weight":
        return lambda q, tau: solve_fixed_weight(q, tau)
    if method == "sa":
        return lambda q, tau: solve_sa(q, **params)
    raise ValueError(f"unknown solver {method!r}")


def _check_capacity(method: str, n: int, tau_max: int):
    if method == "exhaustive" and n > MAX_EXHAUSTIVE_N:
        raise CapacityError(f"exhaustive sweep needs n <= {MAX_EXHAUSTIVE_N}, got {n}")
    if method == "fixed-weight":
        from math import comb
        worst = max(comb(n, t) for t in range(1, tau_max + 1))
        if worst > MAX_COMBINATIONS:
            raise CapacityError(f"fixed-weight sweep up to tau={tau_max} needs {worst} combinations")


def tau_sweep(g: Graph, method: str = "exhaustive", tau_max: int | None = None,
              p0: float | None = None, p1: float | None = None, **solver_params) -> TauSweep:
    tau_max = g.n if tau_max is None else tau_max
    _check_capacity(method, g.n, tau_max)
    solve = make_solver(method, **solver_params)
    records = []
    for tau in range(1, tau_max + 1):
        result = solve(build_ec_qubo(g, tau, p0, p1), tau)
        sets = sorted(tuple(sorted(s)) for s in ground_nodes(result))
        meta = {k: v for k, v in result.meta.items() if k != "levels"}
        meta["ground_energy"] = result.ground_energy
        records.append(TauRecord(tau=tau, node_sets=tuple(sets), solver_meta=meta))
    return TauSweep(graph=g.name, n=g.n, records=tuple(records))


@dataclass(frozen=True)
class RankEntry:
    rank: int
    nodes: tuple[int, ...]
    chosen_set: tuple[int, ...]
    alternatives: tuple[int, ...] = ()
    anomaly: bool = False

    @property
    def tied(self) -> bool:
        return len(self.alternatives) > 1

    @property
    def node(self) -> int | None:
        return self.nodes[0] if len(self.nodes) == 1 else None


@dataclass(frozen=True)
class RankReport:
    graph: str
    n: int
    entries: tuple[RankEntry, ...]

    @property
    def anomalies(self) -> list[int]:
        return [e.rank for e in self.entries if e.anomaly]

    @property
    def order(self) -> list[int]:
        """Nodes in rank order (anomalous entries contribute all their nodes)."""
        return [v for e in self.entries for v in e.nodes]

    def is_complete(self) -> bool:
        order = self.order
        return len(order) == self.n and sorted(order) == list(range(self.n))

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "graph": self.graph,
            "n": self.n,
            "anomalies": self.anomalies,
            "entries": [
                {**asdict(e), "tied": e.tied} for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "RankReport":
        entries = tuple(
            RankEntry(
                rank=e["rank"],
                nodes=tuple(e["nodes"]),
                chosen_set=tuple(e["chosen_set"]),
                alternatives=tuple(e["alternatives"]),
                anomaly=e["anomaly"],
            )
            for e in obj["entries"]
        )
        return cls(graph=obj["graph"], n=obj["n"], entries=entries)

    def to_table(self, reference: Sequence[float] | None = None, tie_tol: float = 1e-6,
                 labels=None) -> str:
        """Three columns (tau, chosen top-tau set, node of that rank) plus an
        optional classical reference ranking."""
        name = (lambda v: labels.get(v, str(v))) if labels else str
        ref_order = None
        if reference is not None:
            ref_order = [v for grp in tie_groups(reference, tie_tol) for v in grp]
        head = ["tau", "top-tau set", "rank node"]
        if ref_order is not None:
            head.append("reference")
        rows = [head]
        for e in self.entries:
            node = ", ".join(name(v) for v in e.nodes)
            if e.tied:
                node += "  (tie: " + ", ".join(name(v) for v in e.alternatives) + ")"
            if e.anomaly:
                node += "  [anomaly]"
            row = [str(e.rank), ", ".join(name(v) for v in e.chosen_set), node]
            if ref_order is not None:
                row.append(name(ref_order[e.rank - 1]) if e.rank <= len(ref_order) else "")
            rows.append(row)
        widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def rank_from_sweep(s: TauSweep) -> RankReport:
    """Extract ranks from consecutive top-tau sets.

    Rank ``r`` is ``S_r minus S_{r-1}``. Among degenerate ground sets for
    tau = r the lexicographically smallest superset of ``S_{r-1}`` is
    chosen; if none exists, the smallest set is taken, the entry holds the
    full symmetric difference, and it is flagged as an anomaly.

    ``alternatives`` lists every node that could have taken this rank under
    some other degenerate choice: the union of the tau = r ground sets
    minus the nodes common to all tau = r - 1 ground sets.
    """
    by_tau = {r.tau: r for r in s.records}
    taus = sorted(by_tau)
    if not taus or taus != list(range(1, taus[-1] + 1)):
        raise ValueError(f"sweep must cover tau = 1..k contiguously, got {taus}")
    for t in taus:
        if not by_tau[t].node_sets:
            raise ValueError(f"no ground set recorded for tau={t}")
    prev: frozenset[int] = frozenset()
    prev_common: frozenset[int] = frozenset()
    entries = []
    for t in taus:
        sets = [frozenset(x) for x in by_tau[t].node_sets]
        ordered = sorted(sets, key=lambda x: sorted(x))
        nested = [x for x in ordered if prev <= x and len(x) == len(prev) + 1]
        anomaly = not nested
        chosen = nested[0] if nested else ordered[0]
        union = frozenset().union(*sets)
        alternatives = tuple(sorted(union - prev_common))
        diff = chosen ^ prev if anomaly else chosen - prev
        entries.append(RankEntry(
            rank=t,
            nodes=tuple(sorted(diff)),
            chosen_set=tuple(sorted(chosen)),
            alternatives=alternatives if len(alternatives) > 1 else (),
            anomaly=anomaly,
        ))
        prev = chosen
        prev_common = frozenset.intersection(*sets)
    return RankReport(graph=s.graph, n=s.n, entries=tuple(entries))


@dataclass(frozen=True)
class RankAgreement:
    prefix: int
    overlaps: tuple[float, ...]
    kendall: float

    def to_dict(self) -> dict:
        return {"prefix": self.prefix, "overlaps": list(self.overlaps), "kendall": self.kendall}


def _positions(groups: list[list[int]]) -> dict[int, tuple[int, int]]:
    pos = {}
    start = 1
    for grp in groups:
        end = start + len(grp) - 1
        for v in grp:
            pos[v] = (start, end)
        start = end + 1
    return pos


def compare_rankings(a: RankReport, b: Sequence[float], tie_tol: float = 1e-6) -> RankAgreement:
    """Agreement between a QUBO hierarchy and reference centrality scores.

    * ``prefix``: number of leading ranks whose node may occupy that
      position in the reference ordering (tied reference nodes share a
      range of positions).
    * ``overlaps[t-1]``: tie-aware ``|S_t ∩ top_t(b)| / t`` where ``S_t`` is
      the hierarchy's first ``t`` nodes.
    * ``kendall``: ``(C - D) / (C + D)`` over node pairs ordered strictly by
      both sides (ties in the reference are skipped).
    """
    b = np.asarray(b, dtype=float)
    order = a.order
    if sorted(order) != list(range(len(b))):
        raise ValueError("ranking and reference scores cover different node sets")
    groups = tie_groups(b, tie_tol)
    pos = _positions(groups)

    prefix = 0
    for r, v in enumerate(order, start=1):
        lo, hi = pos[v]
        if not lo <= r <= hi:
            break
        prefix += 1

    overlaps = []
    for t in range(1, len(order) + 1):
        s_t = set(order[:t])
        strict = {v for v, (lo, hi) in pos.items() if hi <= t}
        boundary = {v for v, (lo, hi) in pos.items() if lo <= t < hi}
        hit = len(s_t & strict) + min(len(s_t & boundary), t - len(strict))
        overlaps.append(hit / t)

    rank_of = {v: r for r, v in enumerate(order)}
    concordant = discordant = 0
    for i, j in combinations(range(len(b)), 2):
        if abs(b[i] - b[j]) <= tie_tol:
            continue
        ref = 1 if b[i] > b[j] else -1
        ours = 1 if rank_of[i] < rank_of[j] else -1
        if ref == ours:
            concordant += 1
        else:
            discordant += 1
    total = concordant + discordant
    kendall = (concordant - discordant) / total if total else 1.0
    return RankAgreement(prefix=prefix, overlaps=tuple(overlaps), kendall=kendall)
