"""Edge-weighted connectivity graphs and the path/tree searches run on them.

Edge weights are CNOT error rates ``p``.  Path searches minimise
``1 - prod(1 - alpha * p)``, which is order-equivalent to minimising the
additive length ``-log(1 - alpha * p)``, so plain Dijkstra applies.  All
searches break ties toward the smallest vertex label.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

import networkx as nx

from .errors import BackendFormatError, CutVertex, Disconnected, UnknownLabel

MAX_WEIGHT = 0.8
_TREE_TIE = 1e-12

Edge = tuple[int, int]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Topology:
    """Undirected connected graph with CNOT error rates on its edges."""

    def __init__(self, vertices: Iterable[int], edges: Mapping[Edge, float] | Iterable,
                 name: str = "", check_connected: bool = True):
        self.name = name
        self.vertices = tuple(sorted(int(v) for v in vertices))
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise BackendFormatError("duplicate vertex")
        items = edges.items() if isinstance(edges, Mapping) else ((tuple(e[:2]), e[2]) for e in edges)
        self.weights: dict[Edge, float] = {}
        for (u, v), w in items:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise BackendFormatError(f"self-loop on vertex {u}")
            if u not in vset or v not in vset:
                raise BackendFormatError(f"edge ({u},{v}) uses an unknown vertex")
            if not (0.0 <= w < MAX_WEIGHT) or math.isnan(w):
                raise BackendFormatError(f"edge ({u},{v}) weight {w} outside [0, {MAX_WEIGHT})")
            k = _key(u, v)
            if k in self.weights:
                raise BackendFormatError(f"duplicate edge {k}")
            self.weights[k] = w
        self.adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.weights:
            self.adj[u].append(v)
            self.adj[v].append(u)
        for v in self.adj:
            self.adj[v].sort()
        if check_connected and not self.is_connected():
            raise Disconnected(f"topology {name or ''} is not connected".replace("  ", " "))

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.adj

    def __repr__(self) -> str:
        return f"Topology({self.name!r}, |V|={len(self.vertices)}, |E|={len(self.weights)})"

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.weights)

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self.weights

    def weight(self, u: int, v: int) -> float:
        try:
            return self.weights[_key(u, v)]
        except KeyError:
            raise UnknownLabel(f"no edge ({u},{v})") from None

    def neighbors(self, v: int) -> list[int]:
        return self.adj[v]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for (u, v), w in self.weights.items():
            g.add_edge(u, v, weight=w)
        return g

    def to_json(self) -> str:
        return json.dumps({
            "name": self.name,
            "num_qubits": len(self.vertices),
            "edges": [[u, v, w] for (u, v), w in sorted(self.weights.items())],
        })


# --- ingestion ---------------------------------------------------------------

_BACKEND_KEYS = {"name", "num_qubits", "edges"}


def load_backend(text: str) -> Topology:
    """Parse the backend JSON format ``{"name", "num_qubits", "edges": [[u, v, w], ...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BackendFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise BackendFormatError("backend must be a JSON object")
    extra = set(data) - _BACKEND_KEYS
    missing = _BACKEND_KEYS - set(data)
    if extra:
        raise BackendFormatError(f"unknown fields {sorted(extra)}")
    if missing:
        raise BackendFormatError(f"missing fields {sorted(missing)}")
    name, n, edges = data["name"], data["num_qubits"], data["edges"]
    if not isinstance(name, str):
        raise BackendFormatError("name must be a string")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise BackendFormatError("num_qubits must be a positive integer")
    if not isinstance(edges, list):
        raise BackendFormatError("edges must be a list")
    parsed = []
    for e in edges:
        if (not isinstance(e, list) or len(e) != 3
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in e[:2])
                or not isinstance(e[2], (int, float)) or isinstance(e[2], bool)):
            raise BackendFormatError(f"malformed edge {e!r}")
        parsed.append((e[0], e[1], e[2]))
    for u, v, _ in parsed:
        if not (0 <= u < n and 0 <= v < n):
            raise BackendFormatError(f"edge ({u},{v}) outside 0..{n - 1}")
    return Topology(range(n), parsed, name=name)


BUNDLED = ("nairobi", "guadalupe", "cairo")


def bundled_backend(name: str) -> Topology:
    if name not in BUNDLED:
        raise UnknownLabel(f"no bundled backend {name!r}")
    text = resources.files("cnotroute.backends").joinpath(f"{name}.json").read_text()
    return load_backend(text)


def resolve_backend(source: str) -> Topology:
    """A bundled backend name, or a path to a backend JSON file."""
    stem = source[:-5] if source.endswith(".json") else source
    if stem in BUNDLED and not Path(source).exists():
        return bundled_backend(stem)
    return load_backend(Path(source).read_text())


# --- structure ---------------------------------------------------------------

def non_cut_vertices(g: Topology) -> set[int]:
    if len(g) == 1:
        return set(g.vertices)
    return set(g.vertices) - set(nx.articulation_points(g.to_networkx()))


def induced_subgraph(g: Topology, labels: Iterable[int]) -> Topology:
    labels = set(labels)
    for v in labels:
        if v not in g:
            raise UnknownLabel(f"vertex {v} not in topology")
    edges = {e: w for e, w in g.weights.items() if e[0] in labels and e[1] in labels}
    return Topology(labels, edges, name=g.name)


def remove_vertex(g: Topology, v: int) -> Topology:
    if v not in g:
        raise UnknownLabel(f"vertex {v} not in topology")
    rest = [x for x in g.vertices if x != v]
    edges = {e: w for e, w in g.weights.items() if v not in e}
    sub = Topology(rest, edges, name=g.name, check_connected=False)
    if not sub.is_connected():
        raise CutVertex(f"removing {v} disconnects the topology")
    return sub


def avg_incident_weight(g: Topology, v: int) -> float:
    nbrs = g.neighbors(v)
    if not nbrs:
        return 0.0
    return sum(g.weight(v, u) for u in nbrs) / len(nbrs)


def connected_prefix(g: Topology, n: int) -> list[int]:
    """``n`` vertices grown from the smallest label, always adding the smallest frontier label.

    Equals ``0..n-1`` whenever that set is connected.
    """
    if not 1 <= n <= len(g):
        raise ValueError(f"cannot pick {n} of {len(g)} vertices")
    chosen = [g.vertices[0]]
    inside = set(chosen)
    frontier: list[int] = []
    for u in g.neighbors(chosen[0]):
        heapq.heappush(frontier, u)
    while len(chosen) < n:
        v = heapq.heappop(frontier)
        if v in inside:
            continue
        chosen.append(v)
        inside.add(v)
        for u in g.neighbors(v):
            if u not in inside:
                heapq.heappush(frontier, u)
    return sorted(chosen)


# --- paths -------------------------------------------------------------------

def edge_length(p: float, alpha: float) -> float:
    ap = alpha * p
    if ap >= 1.0:
        raise ValueError(f"alpha * p = {ap} must be below 1")
    return -math.log1p(-ap)


def path_cost_of(g: Topology, path: list[Edge], alpha: float) -> float:
    prod = 1.0
    for u, v in path:
        prod *= 1.0 - alpha * g.weight(u, v)
    return 1.0 - prod


def _dijkstra(g: Topology, sources: Iterable[int], alpha: float, allowed=None):
    """Multi-source Dijkstra. Returns ``(dist, pred)``; sources have no predecessor."""
    dist: dict[int, float] = {}
    pred: dict[int, int | None] = {}
    heap = []
    for s in sorted(set(sources)):
        dist[s] = 0.0
        pred[s] = None
        heap.append((0.0, s))
    heapq.heapify(heap)
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y in g.adj[x]:
            if allowed is not None and y not in allowed:
                continue
            nd = d + edge_length(g.weights[_key(x, y)], alpha)
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                pred[y] = x
                heapq.heappush(heap, (nd, y))
    return dist, pred


def _trace(pred, v: int) -> list[int]:
    out = [v]
    while pred[out[-1]] is not None:
        out.append(pred[out[-1]])
    return out


def cheapest_path(g: Topology, u: int, v: int, alpha: float = 1.0) -> tuple[list[Edge], float]:
    """Directed edge list from ``u`` to ``v`` minimising ``1 - prod(1 - alpha p)``."""
    for x in (u, v):
        if x not in g:
            raise UnknownLabel(f"vertex {x} not in topology")
    if u == v:
        return [], 0.0
    _, pred = _dijkstra(g, [u], alpha)
    if v not in pred:
        raise Disconnected(f"{v} unreachable from {u}")
    nodes = _trace(pred, v)[::-1]
    path = list(zip(nodes, nodes[1:]))
    return path, path_cost_of(g, path, alpha)


# --- Steiner trees -----------------------------------------------------------

@dataclass
class SteinerTree:
    """Rooted tree spanning ``terminals``; ``parent`` maps each non-root vertex upward."""

    root: int
    terminals: frozenset[int]
    parent: dict[int, int] = field(default_factory=dict)
    weights: dict[Edge, float] = field(default_factory=dict)

    @property
    def vertices(self) -> set[int]:
        return {self.root, *self.parent}

    @property
    def steiner_nodes(self) -> set[int]:
        return self.vertices - set(self.terminals)

    @property
    def edges(self) -> list[Edge]:
        """``(parent, child)`` pairs sorted by child."""
        return [(p, c) for c, p in sorted(self.parent.items())]

    def children(self, v: int) -> list[int]:
        return sorted(c for c, p in self.parent.items() if p == v)

    def neighbors(self, v: int) -> list[int]:
        out = self.children(v)
        if v in self.parent:
            out.append(self.parent[v])
        return sorted(out)

    def weight(self, u: int, v: int) -> float:
        return self.weights[_key(u, v)]

    def total_weight(self) -> float:
        return sum(self.weights.values())

    def path_from_root(self, v: int) -> list[Edge]:
        nodes = [v]
        while nodes[-1] != self.root:
            nodes.append(self.parent[nodes[-1]])
        nodes.reverse()
        return list(zip(nodes, nodes[1:]))

    def top_down(self) -> list[Edge]:
        """Union of root-to-terminal paths, terminals in ascending label order.

        Each ``(parent, child)`` edge appears once, after the edge above it, so
        the reversed list visits every child before its parent.
        """
        seen: set[Edge] = set()
        out: list[Edge] = []
        for t in sorted(self.terminals):
            for e in self.path_from_root(t):
                if e not in seen:
                    seen.add(e)
                    out.append(e)
        # Vertices hanging off no terminal path cannot exist after pruning,
        # but keep every edge for safety.
        for p, c in self.edges:
            if (p, c) not in seen:
                seen.add((p, c))
                out.append((p, c))
        return out

    def tree_path(self, u: int, v: int) -> list[Edge]:
        """The unique directed path from ``u`` to ``v`` inside the tree."""
        up_u = [u]
        while up_u[-1] != self.root:
            up_u.append(self.parent[up_u[-1]])
        up_v = [v]
        while up_v[-1] != self.root:
            up_v.append(self.parent[up_v[-1]])
        anc = set(up_u)
        k = 0
        while up_v[k] not in anc:
            k += 1
        meet = up_v[k]
        left = up_u[: up_u.index(meet) + 1]
        right = up_v[:k][::-1]
        nodes = left + right
        return list(zip(nodes, nodes[1:]))


def _grow(g: Topology, start: int, terms: set[int], alpha: float) -> dict[int, int]:
    """Prim-style growth from ``start``; returns a child -> parent map."""
    parent: dict[int, int] = {}
    in_tree = {start}
    remaining = terms - in_tree
    while remaining:
        dist, pred = _dijkstra(g, in_tree, alpha)
        best = min(remaining, key=lambda t: (dist.get(t, math.inf), t))
        if best not in dist:
            raise Disconnected(f"terminal {best} unreachable")
        chain = _trace(pred, best)  # best ... attach point
        for child, par in zip(chain[::-1][1:], chain[::-1]):
            parent[child] = par
            in_tree.add(child)
        remaining -= in_tree
    return parent


def _reroot(parent: dict[int, int], old_root: int, root: int) -> dict[int, int]:
    adj: dict[int, list[int]] = {old_root: []}
    for c, p in parent.items():
        adj.setdefault(c, []).append(p)
        adj.setdefault(p, []).append(c)
    out: dict[int, int] = {}
    stack = [root]
    seen = {root}
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                out[y] = x
                stack.append(y)
    return out


def steiner_tree(g: Topology, root: int, terminals: Iterable[int], alpha: float = 1.0) -> SteinerTree:
    """Grow from ``root``; repeatedly splice in the terminal cheapest to reach from the tree.

    On graphs with cycles the growth is also started from every other
    terminal and the lightest result (by total edge length, then edge count)
    is kept and re-rooted at ``root``.  Ties keep the root-grown tree.
    """
    terms = set(terminals) | {root}
    for t in terms:
        if t not in g:
            raise UnknownLabel(f"terminal {t} not in topology")

    def length(par: dict[int, int]) -> tuple[float, int]:
        return math.fsum(edge_length(g.weight(c, p), alpha) for c, p in par.items()), len(par)

    best = _prune_map(_grow(g, root, terms, alpha), root, terms)
    if len(g.weights) >= len(g) and len(terms) > 2:
        best_len = length(best)
        for s in sorted(terms - {root}):
            cand = _reroot(_grow(g, s, terms, alpha), s, root)
            cand = _prune_map(cand, root, terms)
            cl = length(cand)
            if cl[0] < best_len[0] - _TREE_TIE or (abs(cl[0] - best_len[0]) <= _TREE_TIE and cl[1] < best_len[1]):
                best, best_len = cand, cl
    tree = SteinerTree(root=root, terminals=frozenset(terms))
    for c, p in best.items():
        tree.parent[c] = p
        tree.weights[_key(c, p)] = g.weight(c, p)
    return tree


def _prune_map(parent: dict[int, int], root: int, terms: set[int]) -> dict[int, int]:
    """Drop non-terminal leaves until every leaf is a terminal."""
    parent = dict(parent)
    changed = True
    while changed:
        changed = False
        has_child = set(parent.values())
        for v in list(parent):
            if v not in has_child and v not in terms:
                parent.pop(v)
                changed = True
    return parent
