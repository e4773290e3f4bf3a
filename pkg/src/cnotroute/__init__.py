"""Noise-aware CNOT circuit routing on edge-weighted hardware topologies."""

from .circuits import CnotCircuit, QubitMap, apply_map, compose, emit, ops_to_circuit, parse
from .cost import CostReport, alpha, cost, path_cost
from .fidelity import FidelityResult, avg_gate_fidelity, dense_superoperator_favg
from .gf2 import (
    ParityMatrix,
    RowOp,
    apply_row_op,
    from_circuit,
    identity,
    is_permutation,
    rank,
    relabel,
    solve_rows,
    verify_synthesis,
)
from .synthesis import SynthesisResult, napermrowcol, permrowcol, rowcol, synthesize
from .topology import (
    SteinerTree,
    Topology,
    bundled_backend,
    cheapest_path,
    induced_subgraph,
    load_backend,
    non_cut_vertices,
    remove_vertex,
    steiner_tree,
)

__all__ = [
    "CnotCircuit", "QubitMap", "apply_map", "compose", "emit", "ops_to_circuit", "parse",
    "CostReport", "alpha", "cost", "path_cost",
    "FidelityResult", "avg_gate_fidelity", "dense_superoperator_favg",
    "ParityMatrix", "RowOp", "apply_row_op", "from_circuit", "identity", "is_permutation",
    "rank", "relabel", "solve_rows", "verify_synthesis",
    "SynthesisResult", "napermrowcol", "permrowcol", "rowcol", "synthesize",
    "SteinerTree", "Topology", "bundled_backend", "cheapest_path", "induced_subgraph",
    "load_backend", "non_cut_vertices", "remove_vertex", "steiner_tree",
]
