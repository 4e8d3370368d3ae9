"""Command-line interface.

Exit codes: 0 success, 2 usage or input error, 3 capacity guard,
4 non-convergence under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .centrality import (
    degree_centrality,
    eigencentrality,
    penalty_relaxation,
    tie_groups,
    top_tau,
    walk_centrality,
)
from .errors import CapacityError, ConvergenceError, ECQuboError, GraphError
from .graph import Graph, density, load_graph, to_dot
from .qubo import build_ec_qubo, write_qubo
from .ranking import compare_rankings, rank_from_sweep, tau_sweep
from .solvers import ground_nodes, solve_exhaustive, solve_fixed_weight, solve_sa

EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_STRICT = 4

PALETTE = {"low": "#440154", "mid": "#21918c", "high": "#fde725",
           "selected": "#fde725", "default": "#440154"}


@dataclass
class RunReport:
    graph: dict
    method: str
    parameters: dict
    result: dict
    reference: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    format_version: int = 1

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def graph_summary(g: Graph) -> dict:
    return {
        "name": g.name,
        "n": g.n,
        "edges": g.num_edges,
        "density": density(g) if g.n > 1 else None,
    }


def _names(g: Graph, nodes) -> list[str]:
    return [g.label(v) for v in sorted(nodes)]


def _rank_labels(scores, tie_tol=1e-6) -> dict[int, str]:
    out = {}
    start = 1
    for grp in tie_groups(scores, tie_tol):
        end = start + len(grp) - 1
        tag = str(start) if start == end else f"[{start}-{end}]"
        for v in grp:
            out[v] = tag
        start = end + 1
    return out


def _resolve_solver(name: str, n: int) -> str:
    if name == "auto":
        return "exhaustive" if n <= 20 else "fixed-weight"
    return name


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def _scores(g: Graph, args) -> tuple[np.ndarray, dict]:
    info = {}
    if args.measure == "ec":
        ec = eigencentrality(g)
        info = {"lambda1": ec.lambda1, "iterations": ec.iterations, "residual": ec.residual}
        return ec.scores, info
    if args.measure == "degree":
        return degree_centrality(g), info
    if args.measure == "walk":
        return walk_centrality(g, args.gamma).scores, {"gamma": args.gamma}
    if args.measure == "relax":
        res = penalty_relaxation(g, P=args.penalty, restarts=args.restarts, seed=args.seed)
        info = {"P": args.penalty, "restarts": args.restarts, "seed": args.seed,
                "objective": res.objective, "converged": res.converged}
        if not res.converged:
            print("warning: Nelder-Mead did not converge; returning best point found", file=sys.stderr)
            if args.strict:
                raise ConvergenceError("penalty relaxation did not converge")
        return res.scores, info
    raise GraphError(f"unknown measure {args.measure!r}")


def cmd_centrality(args) -> int:
    g = load_graph(args.graph, seed=args.seed)
    scores, info = _scores(g, args)
    ranks = _rank_labels(scores, args.tie_tol)
    order = [v for grp in tie_groups(scores, args.tie_tol) for v in grp]
    lines = [f"# {args.measure} centrality on {g.name} (n={g.n}, |E|={g.num_edges})"]
    lines += [f"# {k}={v}" for k, v in info.items()]
    lines.append(f"{'node':>14}  {'score':>12}  rank")
    for v in order:
        lines.append(f"{g.label(v):>14}  {scores[v]:12.6f}  {ranks[v]}")
    payload = {
        "format_version": 1,
        "graph": graph_summary(g),
        "measure": args.measure,
        "info": info,
        "nodes": [{"node": v, "label": g.label(v), "score": float(scores[v]), "rank": ranks[v]}
                  for v in order],
    }
    _emit(args, payload, "\n".join(lines) + "\n")
    return 0


def cmd_qubo_export(args) -> int:
    g = load_graph(args.graph, seed=args.seed)
    q = build_ec_qubo(g, args.tau, args.p0, args.p1)
    text = write_qubo(q, comments=[f"graph {g.name} n={g.n} edges={g.num_edges}"])
    with open(args.out, "w") as fh:
        fh.write(text)
    payload = {"format_version": 1, "graph": graph_summary(g), "out": args.out,
               "tau": args.tau, "p0": q.meta["p0"], "p1": q.meta["p1"]}
    _emit(args, payload, f"wrote {args.out} (tau={args.tau}, P0={q.meta['p0']:.6g}, P1={q.meta['p1']:.6g})\n")
    return 0


def _solve(g: Graph, tau: int, args):
    q = build_ec_qubo(g, tau, args.p0, args.p1)
    method = _resolve_solver(args.solver, g.n)
    if method == "exhaustive":
        result = solve_exhaustive(q)
    elif method == "fixed-weight":
        result = solve_fixed_weight(q, tau)
    else:
        result = solve_sa(q, reads=args.reads, sweeps=args.sweeps, seed=args.seed)
    return q, method, result


def cmd_solve(args) -> int:
    g = load_graph(args.graph, seed=args.seed)
    t0 = time.perf_counter()
    q, method, result = _solve(g, args.tau, args)
    sets = sorted((sorted(s) for s in ground_nodes(result)))
    ec = eigencentrality(g)
    ref = top_tau(ec.scores, args.tau, args.tie_tol)
    agree = [ref.accepts(s) for s in sets]
    weight_ok = all(len(s) == args.tau for s in sets)
    params = {"tau": args.tau, "p0": q.meta["p0"], "p1": q.meta["p1"], "solver": method,
              "seed": args.seed, "reads": args.reads, "sweeps": args.sweeps}
    report = RunReport(
        graph=graph_summary(g),
        method=method,
        parameters=params,
        result={"ground_sets": sets, "ground_energy": result.ground_energy,
                "degeneracy": len(sets), "weight_ok": weight_ok},
        reference={"ec_top": sorted(ref.nodes), "ec_strict": sorted(ref.strict),
                   "ec_tie_group": sorted(ref.tie_group), "agrees": agree},
        timing={"solve_seconds": time.perf_counter() - t0},
    )
    if args.json:
        print(report.to_json())
    else:
        out = [
            f"graph {g.name}: |V|={g.n} |E|={g.num_edges} density={report.graph['density']:.4f}",
            f"tau={args.tau} P0={params['p0']:.6g} P1={params['p1']:.6g} solver={method}"
            + (f" reads={args.reads} sweeps={args.sweeps} seed={args.seed}" if method == "sa" else ""),
            f"ground energy {result.ground_energy:.10g}, {len(sets)} degenerate ground state(s)",
        ]
        for s, ok in list(zip(sets, agree))[:args.show]:
            out.append(f"  {{{', '.join(_names(g, s))}}}  EC top-{args.tau} match: {'yes' if ok else 'no'}")
        if len(sets) > args.show:
            out.append(f"  ... {len(sets) - args.show} more (all match: {'yes' if all(agree) else 'no'})")
        if not weight_ok:
            out.append(f"warning: a ground state does not have exactly {args.tau} ones")
        out.append(f"EC top-{args.tau}: {{{', '.join(_names(g, ref.nodes))}}}"
                   + (f" (boundary tie group {{{', '.join(_names(g, ref.tie_group))}}})" if ref.is_tied else ""))
        print("\n".join(out))
    if args.strict and method == "sa" and not all(agree):
        raise ConvergenceError("sampled ground state does not match the EC top set")
    return 0


def cmd_rank(args) -> int:
    g = load_graph(args.graph, seed=args.seed)
    method = _resolve_solver(args.solver, g.n)
    params = {}
    if method == "sa":
        params = {"reads": args.reads, "sweeps": args.sweeps, "seed": args.seed}
    sweep = tau_sweep(g, method, tau_max=args.tau_max, p0=args.p0, p1=args.p1, **params)
    report = rank_from_sweep(sweep)
    ec = eigencentrality(g).scores
    payload = report.to_dict()
    payload["solver"] = method
    payload["weight_violations"] = sweep.weight_violations()
    if report.is_complete():
        payload["agreement"] = compare_rankings(report, ec, args.tie_tol).to_dict()
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(report.to_table(ec if args.compare else None, args.tie_tol, g.labels or None))
        if report.anomalies:
            print(f"anomalies at tau: {report.anomalies}")
        if sweep.weight_violations():
            print(f"ground states with wrong weight at tau: {sweep.weight_violations()}")
    return 0


def cmd_dot(args) -> int:
    g = load_graph(args.graph, seed=args.seed)
    if args.nodes is not None:
        chosen = {int(v) for v in args.nodes.split(",") if v.strip()}
        categories = {v: "selected" for v in chosen}
    elif args.tau is not None:
        _, _, result = _solve(g, args.tau, args)
        chosen = set(ground_nodes(result)[0])
        categories = {v: "selected" for v in chosen}
    else:
        scores, _ = _scores(g, args)
        lo, hi = float(scores.min()), float(scores.max())
        categories = {}
        for v in range(g.n):
            t = 1.0 if hi == lo else (scores[v] - lo) / (hi - lo)
            categories[v] = "high" if t >= 2 / 3 else "mid" if t >= 1 / 3 else "low"
        chosen = {v for v, c in categories.items() if c == "high"}
    text = to_dot(g, categories, PALETTE)
    with open(args.out, "w") as fh:
        fh.write(text)
    _emit(args, {"format_version": 1, "out": args.out, "highlighted": sorted(chosen)},
          f"wrote {args.out} ({len(chosen)} highlighted)\n")
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecqubo", description="Eigenvector centrality via QUBO.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--graph", required=True,
                       help="builtin name, name:p1,p2 (e.g. lollipop:10,20) or edge-list path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--strict", action="store_true", help="treat non-convergence as an error")
        p.add_argument("--tie-tol", type=float, default=1e-6)

    def penalties(p):
        p.add_argument("--p0", type=float, default=None, help="reward weight (default 1/sqrt(n))")
        p.add_argument("--p1", type=float, default=None, help="cardinality penalty (default 5n)")

    def solver(p, default="auto"):
        p.add_argument("--solver", choices=["auto", "exhaustive", "fixed-weight", "sa"], default=default)
        p.add_argument("--reads", type=int, default=1000)
        p.add_argument("--sweeps", type=int, default=1000)

    def measure(p):
        p.add_argument("--measure", choices=["ec", "degree", "walk", "relax"], default="ec")
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--penalty", type=float, default=10.0)
        p.add_argument("--restarts", type=int, default=8)

    p = sub.add_parser("centrality", help="classical centrality table")
    common(p)
    measure(p)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("qubo-export", help="write the EC-QUBO in text form")
    common(p)
    penalties(p)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_qubo_export)

    p = sub.add_parser("solve", help="solve the EC-QUBO for one tau")
    common(p)
    penalties(p)
    solver(p)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--show", type=int, default=20, help="max ground sets listed in text output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("rank", help="node hierarchy from a tau sweep")
    common(p)
    penalties(p)
    solver(p, default="fixed-weight")
    p.add_argument("--tau-max", type=int, default=None)
    p.add_argument("--compare", action="store_true", help="add the EC ranking column")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("dot", help="DOT rendering with highlighted nodes")
    common(p)
    penalties(p)
    solver(p)
    measure(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--nodes", help="comma-separated nodes to highlight")
    group.add_argument("--tau", type=int, help="highlight a ground-state top-tau set")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRICT
    except (ECQuboError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
