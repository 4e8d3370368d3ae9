"""Undirected simple graphs with dense integer node ids.

Graphs are immutable. Nodes are ``0..n-1``; an optional label map carries
human-readable names (the Florentine families) without affecting any of the
numeric machinery.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import _rosters
from .errors import GraphError

__all__ = [
    "Graph",
    "DegreeVector",
    "parse_edge_list",
    "to_edge_list",
    "builtin",
    "BUILTIN_NAMES",
    "adjacency",
    "degrees",
    "density",
    "is_connected",
    "to_json",
    "from_json",
    "to_dot",
    "load_graph",
]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    labels: Mapping[int, str] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"graph needs at least one node, got n={self.n}")
        canon = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canon))
        object.__setattr__(self, "labels", dict(self.labels))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), **kw)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def label(self, node: int) -> str:
        return self.labels.get(node, str(node))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.sorted_edges():
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges


@dataclass(frozen=True)
class DegreeVector:
    d: np.ndarray
    dhat: np.ndarray | None

    @property
    def d_max(self) -> int:
        return int(self.d.max())


# --------------------------------------------------------------------------
# parsing and serialization

_HEADER = re.compile(r"^n\s*=\s*(\d+)$")


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    ``#`` starts a comment. A line ``n=<k>`` sets a lower bound on the node
    count so isolated trailing nodes survive a round trip. Duplicate edges
    collapse; self-loops are rejected.
    """
    edges = set()
    n_header = 0
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            n_header = max(n_header, int(m.group(1)))
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphError(f"line {lineno}: expected 'u v' with non-negative integers, got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at node {u}")
        edges.add((min(u, v), max(u, v)))
        max_id = max(max_id, u, v)
    n = max(n_header, max_id + 1)
    if n < 1:
        raise GraphError("edge list defines no nodes")
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"n={g.n}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def to_json(g: Graph) -> str:
    obj = {
        "format_version": 1,
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "labels": {str(k): v for k, v in sorted(g.labels.items())},
    }
    if g.name:
        obj["name"] = g.name
    return json.dumps(obj)


def from_json(text: str) -> Graph:
    obj = json.loads(text)
    labels = {int(k): v for k, v in obj.get("labels", {}).items()}
    return Graph.from_edges(obj["n"], [tuple(e) for e in obj["edges"]],
                            labels=labels, name=obj.get("name", ""))


def to_dot(g: Graph, categories: Mapping[int, str] | None = None,
           palette: Mapping[str, str] | None = None) -> str:
    """Render ``g`` as a DOT graph, filling nodes by category.

    ``categories`` maps node -> category name; ``palette`` maps category
    name -> color. Uncategorized nodes get the ``"default"`` color.
    """
    categories = categories or {}
    palette = {"default": "white", **(palette or {})}
    title = g.name or "G"
    out = [f'graph "{title}" {{', "  node [style=filled];"]
    for v in range(g.n):
        cat = categories.get(v, "default")
        color = palette.get(cat, palette["default"])
        out.append(f'  {v} [label="{g.label(v)}", fillcolor="{color}"];')
    for u, v in g.sorted_edges():
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# generators


def _complete(k):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def _barabasi_albert(n: int, m: int, seed: int | None) -> list[tuple[int, int]]:
    # Seed: m isolated nodes; node m links to all of them. Later nodes draw m
    # distinct targets from the urn of edge endpoints (degree-proportional).
    if m < 1 or m >= n:
        raise GraphError(f"barabasi_albert needs 1 <= m < n, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    edges = []
    urn: list[int] = []
    targets = list(range(m))
    for source in range(m, n):
        edges.extend((t, source) for t in targets)
        urn.extend(targets)
        urn.extend([source] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(urn[int(rng.integers(len(urn)))])
        targets = sorted(chosen)
    return edges


def _need(name, params, count):
    if len(params) != count:
        raise GraphError(f"{name} takes {count} integer parameter(s), got {len(params)}")


def builtin(name: str, params: Iterable[int] = (), seed: int | None = None) -> Graph:
    """Return one of the named graphs.

    Parameterised families take integer ``params``: ``complete(k)``,
    ``complete_bipartite(m, k)``, ``path(k)``, ``star(k)`` (k leaves),
    ``lollipop(m, k)`` and ``barabasi_albert(n, m)``. The BA generator may
    also take the seed as a third parameter.
    """
    params = [int(p) for p in params]
    key = name.lower().replace("-", "_")
    labels: dict[int, str] = {}
    tag = name if not params else f"{name}:{','.join(map(str, params))}"

    if key == "bull":
        _need(key, params, 0)
        n, edges = 5, _rosters.BULL_EDGES
    elif key == "sedgewick_maze":
        _need(key, params, 0)
        n, edges = 8, _rosters.SEDGEWICK_MAZE_EDGES
    elif key == "karate_club":
        _need(key, params, 0)
        n, edges = 34, _rosters.KARATE_EDGES
    elif key == "florentine_families":
        _need(key, params, 0)
        n, edges = 15, _rosters.FLORENTINE_EDGES
        labels = dict(enumerate(_rosters.FLORENTINE_NAMES))
    elif key == "tutte":
        _need(key, params, 0)
        n, edges = 46, _rosters.TUTTE_EDGES
    elif key == "g8_spider":
        _need(key, params, 0)
        n = 16
        edges = [(0, 1), (0, 2), (0, 3)]
        for hub in (1, 2, 3):
            first = 4 * hub
            edges += [(hub, leaf) for leaf in range(first, first + 4)]
    elif key == "complete":
        _need(key, params, 1)
        (n,) = params
        if n < 1:
            raise GraphError("complete(k) needs k >= 1")
        edges = _complete(n)
    elif key == "complete_bipartite":
        _need(key, params, 2)
        m, k = params
        if m < 1 or k < 1:
            raise GraphError("complete_bipartite(m, k) needs m, k >= 1")
        n = m + k
        edges = [(i, j) for i in range(m) for j in range(m, n)]
    elif key == "path":
        _need(key, params, 1)
        (n,) = params
        if n < 1:
            raise GraphError("path(k) needs k >= 1")
        edges = [(i, i + 1) for i in range(n - 1)]
    elif key == "star":
        _need(key, params, 1)
        (k,) = params
        if k < 1:
            raise GraphError("star(k) needs k >= 1")
        n = k + 1
        edges = [(0, i) for i in range(1, n)]
    elif key == "lollipop":
        _need(key, params, 2)
        m, k = params
        if m < 3 or k < 0:
            raise GraphError(f"lollipop(m, k) needs m >= 3 and k >= 0, got ({m}, {k})")
        n = m + k
        edges = _complete(m) + [(i - 1, i) for i in range(m, n)]
    elif key == "barabasi_albert":
        if len(params) == 3:
            seed = params[2]
            params = params[:2]
        _need(key, params, 2)
        n, m = params
        edges = _barabasi_albert(n, m, seed)
        tag = f"{name}:{n},{m},{seed}"
    else:
        raise GraphError(f"unknown builtin graph {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return Graph.from_edges(n, edges, labels=labels, name=tag)


BUILTIN_NAMES = (
    "bull", "complete", "complete_bipartite", "path", "star", "lollipop",
    "sedgewick_maze", "florentine_families", "karate_club", "tutte",
    "g8_spider", "barabasi_albert",
)


def load_graph(source: str, seed: int | None = None) -> Graph:
    """Resolve ``name``, ``name:p1,p2`` or a path to an edge-list file."""
    name, _, rest = source.partition(":")
    if name.lower().replace("-", "_") in BUILTIN_NAMES:
        params = [int(p) for p in rest.split(",") if p.strip()] if rest else []
        return builtin(name, params, seed=seed)
    try:
        with open(source) as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphError(f"{source!r} is neither a builtin graph nor a readable file: {exc}") from exc
    if source.endswith(".json"):
        g = from_json(text)
    else:
        g = parse_edge_list(text)
    return Graph(g.n, g.edges, labels=g.labels, name=g.name or source)


# --------------------------------------------------------------------------
# matrices and statistics


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    if g.edges:
        idx = np.array(g.sorted_edges())
        a[idx[:, 0], idx[:, 1]] = 1.0
        a[idx[:, 1], idx[:, 0]] = 1.0
    return a


def degrees(g: Graph, normalize: bool = True) -> DegreeVector:
    d = adjacency(g).sum(axis=1)
    dhat = None
    if normalize:
        norm = np.linalg.norm(d)
        if norm == 0:
            raise GraphError("unit degree vector is undefined for an edgeless graph")
        dhat = d / norm
    return DegreeVector(d=d.astype(int), dhat=dhat)


def density(g: Graph) -> float:
    if g.n < 2:
        raise GraphError("density needs at least two nodes")
    return 2.0 * g.num_edges / (g.n * (g.n - 1))


def is_connected(g: Graph) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.neighbors[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.n
