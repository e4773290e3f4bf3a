"""Steiner-tree synthesis of parity matrices on a connectivity graph.

Three algorithms share one reduction loop.  Each step picks a pivot row ``r``
at a non-cut vertex and a pivot column ``c``, turns column ``c`` into ``e_r``
(column reduction), turns row ``r`` into ``e_c^T`` (row reduction), then
deletes the vertex.  ``rowcol`` forces ``c = r`` so the result is the
identity; ``permrowcol`` and ``napermrowcol`` are free to end on a permutation.

Row operations ``R(i, j)`` only ever act on tree edges of the current graph,
so the emitted ``CNOT(j, i)`` gates are all allowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .circuits import CnotCircuit, ops_to_circuit
from .errors import SynthesisError, UnknownLabel
from .gf2 import ParityMatrix, RowOp, solve_rows
from .topology import (
    SteinerTree,
    Topology,
    avg_incident_weight,
    non_cut_vertices,
    remove_vertex,
    steiner_tree,
)

Mode = Literal["perm", "noise_aware"]
_TIE = 1e-12


@dataclass
class ReductionRecord:
    pivot_row: int
    pivot_col: int
    column_ops: list[RowOp]
    row_ops: list[RowOp]
    removed_vertex: int


@dataclass
class SynthesisResult:
    circuit: CnotCircuit
    permutation: ParityMatrix
    ops: list[RowOp]
    per_step: list[ReductionRecord] = field(default_factory=list)
    algorithm: str = ""

    @property
    def output_map(self) -> dict[int, int]:
        """Column label -> row label of the 1 in that column of the permutation."""
        P = self.permutation
        return {c: r for r in P.row_labels for c in P.row_support(r)}


# --- helpers -------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def _unit(g: Topology) -> Topology:
    """Same graph with every edge equally weighted, for the noise-agnostic modes."""
    return Topology(g.vertices, {e: 0.5 for e in g.weights}, name=g.name, check_connected=False)


def _active_cols(A: ParityMatrix, cols) -> list[int]:
    return list(A.col_labels) if cols is None else list(cols)


def _hamming(A: ParityMatrix, r: int, cmask: int) -> int:
    return _popcount(A.row_bits(r) & cmask)


def _column_ones(A: ParityMatrix, c: int, rows) -> list[int]:
    return A.column_support(c, rows)


def _apply(A: ParityMatrix, ops: list[RowOp], op: RowOp) -> None:
    A.xor_row(op.source, op.target)
    ops.append(op)


def _steiner_order(tree: SteinerTree) -> list[int]:
    """Steiner nodes in the order they are met walking the tree top-down."""
    steiner = tree.steiner_nodes
    out = []
    for _, child in tree.top_down():
        if child in steiner and child not in out:
            out.append(child)
    return out


def _tree_path_cost(tree: SteinerTree, path, alpha: float) -> float:
    prod = 1.0
    for u, v in path:
        prod *= 1.0 - alpha * tree.weight(u, v)
    return 1.0 - prod


def _cheapest_terminal_paths(tree: SteinerTree, alpha: float, toward_steiner: bool):
    """One cheapest tree path per Steiner node, unioned as an ordered set.

    ``toward_steiner`` gives terminal->node paths (column reduction); otherwise
    node->terminal paths (row reduction).  Ties go to the shorter path, then
    to the smaller terminal label.
    """
    terminals = sorted(tree.terminals)
    union: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for v in _steiner_order(tree):
        best = None
        for u in terminals:
            path = tree.tree_path(u, v) if toward_steiner else tree.tree_path(v, u)
            cost = _tree_path_cost(tree, path, alpha)
            key = (cost, len(path), u)
            if best is None or cost < best[0][0] - _TIE or (
                abs(cost - best[0][0]) <= _TIE and key[1:] < best[0][1:]
            ):
                best = (key, path)
        for e in best[1]:
            if e not in seen:
                seen.add(e)
                union.append(e)
    return union


def column_first_pass(tree: SteinerTree, alpha: float) -> tuple[list[tuple[int, int]], float]:
    """Noise-aware fill of Steiner nodes: edges ``(a, b)`` meaning ``R(a, b)``, and their Cost."""
    edges = _cheapest_terminal_paths(tree, alpha, toward_steiner=True)
    return edges, _tree_path_cost(tree, edges, alpha)


def row_first_pass(tree: SteinerTree, alpha: float) -> tuple[list[tuple[int, int]], float]:
    """Noise-aware Steiner-to-terminal paths for the row reduction, and their Cost."""
    edges = _cheapest_terminal_paths(tree, alpha, toward_steiner=False)
    return edges, _tree_path_cost(tree, edges, alpha)


# --- pivot selection -------------------------------------------------------------

def select_pivot_row_perm(A: ParityMatrix, g: Topology, cols=None) -> int:
    cmask = A.col_mask(_active_cols(A, cols))
    cands = non_cut_vertices(g)
    return min(cands, key=lambda v: (_hamming(A, v, cmask), v))


def select_pivot_row_na(A: ParityMatrix, g: Topology, cols=None) -> int:
    cmask = A.col_mask(_active_cols(A, cols))
    cands = non_cut_vertices(g)
    return min(cands, key=lambda v: (_hamming(A, v, cmask), avg_incident_weight(g, v), v))


def select_pivot_row_rowcol(A: ParityMatrix, g: Topology, cols=None) -> int:
    return min(non_cut_vertices(g))


def _candidate_cols(A: ParityMatrix, r: int, cols) -> list[int]:
    return A.row_support(r, sorted(_active_cols(A, cols)))


def select_pivot_col_perm(A: ParityMatrix, r: int, cols=None, rows=None) -> int:
    rows = list(A.row_labels) if rows is None else list(rows)
    cands = _candidate_cols(A, r, cols)
    if not cands:
        raise SynthesisError(f"row {r} is zero on the active columns")
    return min(cands, key=lambda c: (len(_column_ones(A, c, rows)), c))


def select_pivot_col_na(A: ParityMatrix, g: Topology, r: int, alpha: float, cols=None,
                        cache: dict | None = None) -> int:
    """Cheapest first-pass column; a column already equal to ``e_r`` wins outright."""
    rows = list(g.vertices)
    cands = _candidate_cols(A, r, cols)
    if not cands:
        raise SynthesisError(f"row {r} is zero on the active columns")
    if len(cands) == 1:
        return cands[0]
    for c in cands:
        if _column_ones(A, c, rows) == [r]:
            return c
    best = None
    for c in cands:
        tree = steiner_tree(g, r, _column_ones(A, c, rows), alpha)
        edges, cost = column_first_pass(tree, alpha)
        if cache is not None:
            cache[c] = (tree, edges)
        if best is None or cost < best[0] - _TIE:
            best = (cost, c)
    return best[1]


# --- reductions ------------------------------------------------------------------

def _check_column(A: ParityMatrix, r: int, c: int, rows) -> None:
    if _column_ones(A, c, rows) != [r]:
        raise SynthesisError(f"column {c} is not e_{r} after reduction")


def _reduce_column(A: ParityMatrix, g: Topology, r: int, c: int, mode: Mode, alpha: float,
                   tree: SteinerTree | None = None, first=None) -> list[RowOp]:
    rows = list(g.vertices)
    ones = _column_ones(A, c, rows)
    ops: list[RowOp] = []
    if ones == [r]:
        return ops
    if tree is None:
        tree = steiner_tree(g, r, ones, alpha)
    down = tree.top_down()
    up = down[::-1]
    if mode == "perm":
        # Fill each zero node from one child, leaves first.
        for p, ch in up:
            if not A.entry(p, c) and A.entry(ch, c):
                _apply(A, ops, RowOp(ch, p))
    else:
        if first is None:
            first, _ = column_first_pass(tree, alpha)
        for a, b in first:
            _apply(A, ops, RowOp(a, b))
    # Every tree node now carries a 1; clear them from the root outward.
    for p, ch in up:
        _apply(A, ops, RowOp(p, ch))
    _check_column(A, r, c, rows)
    return ops


def _reduce_row(A: ParityMatrix, g: Topology, r: int, c: int, mode: Mode, alpha: float,
                cols) -> list[RowOp]:
    rows = list(g.vertices)
    ops: list[RowOp] = []
    S1 = solve_rows(A, r, c, rows)
    if S1 == {r}:
        return ops
    tree = steiner_tree(g, r, S1, alpha)
    down = tree.top_down()
    steiner = tree.steiner_nodes
    if mode == "perm":
        # Add each Steiner node to its parent, root side first, so each one
        # lands an even number of times in the final sum.
        for p, ch in down:
            if ch in steiner:
                _apply(A, ops, RowOp(ch, p))
    else:
        paths, _ = row_first_pass(tree, alpha)
        nxt = dict(paths)
        depth: dict[int, int] = {}

        def hops(v: int) -> int:
            if v not in nxt:
                return 0
            if v not in depth:
                depth[v] = 1 + hops(nxt[v])
            return depth[v]

        # Edges feeding a Steiner node go before the edge leaving it.
        order = sorted(range(len(paths)), key=lambda k: -hops(paths[k][0]))
        forward = [paths[k] for k in order]
        for a, b in forward:
            _apply(A, ops, RowOp(a, b))
        # Restore Steiner nodes that received a parity on the way.
        for a, b in reversed(forward):
            if b in steiner:
                _apply(A, ops, RowOp(a, b))
    for p, ch in down[::-1]:
        _apply(A, ops, RowOp(ch, p))
    cmask = A.col_mask(cols)
    if A.row_bits(r) & cmask != 1 << A.col_pos(c):
        raise SynthesisError(f"row {r} is not e_{c} after reduction")
    _check_column(A, r, c, rows)
    return ops


def reduce_column(A: ParityMatrix, g: Topology, r: int, c: int, mode: Mode = "perm",
                  alpha: float = 1.0) -> tuple[list[RowOp], ParityMatrix]:
    """Row operations turning column ``c`` into ``e_r`` on the vertices of ``g``."""
    B = A.copy()
    gg = g if mode == "noise_aware" else _unit(g)
    ops = _reduce_column(B, gg, r, c, mode, alpha if mode == "noise_aware" else 1.0)
    return ops, B


def reduce_row(A: ParityMatrix, g: Topology, r: int, c: int, mode: Mode = "perm",
               alpha: float = 1.0, cols=None) -> tuple[list[RowOp], ParityMatrix]:
    """Row operations turning row ``r`` into ``e_c^T``; column ``c`` must already be ``e_r``."""
    B = A.copy()
    gg = g if mode == "noise_aware" else _unit(g)
    cols = _active_cols(A, cols)
    ops = _reduce_row(B, gg, r, c, mode, alpha if mode == "noise_aware" else 1.0, cols)
    return ops, B


# --- drivers --------------------------------------------------------------------

def _synthesize(A: ParityMatrix, g: Topology, algorithm: str, alpha: float) -> SynthesisResult:
    if set(A.row_labels) != set(g.vertices):
        raise UnknownLabel("matrix row labels must equal the topology vertices")
    if algorithm == "rowcol" and set(A.col_labels) != set(A.row_labels):
        raise UnknownLabel("rowcol needs identical row and column labels")
    W = A.copy()
    mode: Mode = "noise_aware" if algorithm == "napermrowcol" else "perm"
    alpha_eff = alpha if mode == "noise_aware" else 1.0
    cur = g if mode == "noise_aware" else _unit(g)
    cols = sorted(A.col_labels)
    all_ops: list[RowOp] = []
    steps: list[ReductionRecord] = []
    pairs: list[tuple[int, int]] = []
    while len(cur) > 1:
        cache: dict = {}
        if algorithm == "rowcol":
            r = select_pivot_row_rowcol(W, cur, cols)
            c = r
        elif algorithm == "permrowcol":
            r = select_pivot_row_perm(W, cur, cols)
            c = select_pivot_col_perm(W, r, cols, cur.vertices)
        else:
            r = select_pivot_row_na(W, cur, cols)
            c = select_pivot_col_na(W, cur, r, alpha_eff, cols, cache)
        tree, first = cache.get(c, (None, None))
        col_ops = _reduce_column(W, cur, r, c, mode, alpha_eff, tree, first)
        row_ops = _reduce_row(W, cur, r, c, mode, alpha_eff, cols)
        all_ops += col_ops + row_ops
        steps.append(ReductionRecord(r, c, col_ops, row_ops, r))
        pairs.append((r, c))
        cur = remove_vertex(cur, r)
        cols.remove(c)
    last_r, last_c = cur.vertices[0], cols[0]
    if not W.entry(last_r, last_c):
        raise SynthesisError("final entry is zero; input was not full rank")
    pairs.append((last_r, last_c))
    bits = np.zeros((A.n, A.n), dtype=np.uint8)
    for r, c in pairs:
        bits[A.row_pos(r), A.col_pos(c)] = 1
    P = ParityMatrix(bits, A.row_labels, A.col_labels)
    width = max(A.row_labels) + 1
    return SynthesisResult(
        circuit=ops_to_circuit(all_ops, width),
        permutation=P,
        ops=all_ops,
        per_step=steps,
        algorithm=algorithm,
    )


def permrowcol(A: ParityMatrix, g: Topology) -> SynthesisResult:
    return _synthesize(A, g, "permrowcol", 1.0)


def napermrowcol(A: ParityMatrix, g: Topology, alpha: float | None = None) -> SynthesisResult:
    if alpha is None:
        from .cost import alpha as _alpha
        alpha = _alpha(max(len(g), 2))
    return _synthesize(A, g, "napermrowcol", alpha)


def rowcol(A: ParityMatrix, g: Topology) -> SynthesisResult:
    return _synthesize(A, g, "rowcol", 1.0)


ALGORITHMS: dict[str, Callable[..., SynthesisResult]] = {
    "rowcol": rowcol,
    "permrowcol": permrowcol,
    "napermrowcol": napermrowcol,
}


def synthesize(algorithm: str, A: ParityMatrix, g: Topology, alpha: float | None = None) -> SynthesisResult:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}") from None
    if algorithm == "napermrowcol":
        return fn(A, g, alpha)
    return fn(A, g)
