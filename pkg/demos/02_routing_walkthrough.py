"""Route a 7-qubit CNOT circuit onto the IBM Nairobi coupling map.

Walks through the first reduction step of the noise-aware algorithm, then
compares all three algorithms on the same input.
"""

from __future__ import annotations

from cnotroute import CnotCircuit, bundled_backend, cost, from_circuit, relabel, synthesize, verify_synthesis
from cnotroute.cost import alpha
from cnotroute.synthesis import select_pivot_col_na, select_pivot_row_na
from cnotroute.topology import avg_incident_weight, non_cut_vertices

GATES = [(1, 0), (1, 3), (1, 2), (6, 0), (0, 3), (2, 4), (5, 1),
         (3, 2), (1, 2), (1, 5), (0, 1), (2, 6), (2, 5), (4, 0)]
PHI = [3, 4, 1, 2, 6, 5, 0]

g = bundled_backend("nairobi")
print(g)
for (u, v), w in sorted(g.weights.items()):
    print(f"  edge {u}-{v}: error rate {w}")

A = relabel(from_circuit(CnotCircuit(7, tuple(GATES))), PHI)
print("\nParity matrix after mapping logical qubit i to register PHI[i]:")
print(A)

# Pivot row: non-cut vertex with the lightest row, then the quietest neighbourhood.
cands = sorted(non_cut_vertices(g))
print("\nnon-cut vertices:", cands)
for v in cands:
    print(f"  row {v}: weight {len(A.row_support(v))}, avg incident error {avg_incident_weight(g, v):.5f}")
a = alpha(7)
r = select_pivot_row_na(A, g)
c = select_pivot_col_na(A, g, r, a)
print(f"pivot row {r}, pivot column {c}'  (alpha = {a:.6f})")

res = synthesize("napermrowcol", A, g)
step = res.per_step[0]
print("\nfirst column reduction, as CNOTs:", [(o.target, o.source) for o in step.column_ops])
print("first row reduction, as CNOTs:   ", [(o.target, o.source) for o in step.row_ops])

print("\nwhere each input register ends up:")
for col, row in sorted(res.output_map.items(), key=lambda kv: kv[1]):
    print(f"  {row} -> {col}'")

print("\nalgorithm      CNOTs   Cost")
for algo in ("rowcol", "permrowcol", "napermrowcol"):
    out = synthesize(algo, A, g)
    assert verify_synthesis(A, out.ops, out.permutation)
    rep = cost(out.circuit, g, 7)
    print(f"{algo:<14}{rep.gate_count:>6}   {rep.cost:.4f}")
