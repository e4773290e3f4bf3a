"""How well does the closed-form Cost predict the true error probability?

The oracle sums over all 4^n Pauli labels, pushing every gate's noise to the
end of the circuit.  Cost needs one multiplication per gate.
"""

from __future__ import annotations

from cnotroute import CnotCircuit, avg_gate_fidelity, bundled_backend, cost, dense_superoperator_favg
from cnotroute.bench import gen_topology_circuit
from cnotroute.cost import alpha
from cnotroute.topology import Topology

g = bundled_backend("nairobi")

# A single CNOT: the n-qubit error probability is alpha(n) * p exactly.
one = CnotCircuit(7, ((0, 1),))
fid = avg_gate_fidelity(one, g)
print(f"one CNOT on 0-1: Prob = {fid.prob:.10f}, alpha(7) * p = {alpha(7) * 0.00777:.10f}")

# Cross-check the Pauli-sum oracle against explicit superoperators on 3 qubits.
small = Topology(range(3), [(0, 1, 0.02), (1, 2, 0.05)])
c3 = CnotCircuit(3, ((0, 1), (1, 2), (1, 0), (2, 1)))
print(f"3 qubits: Pauli sum {avg_gate_fidelity(c3, small).f_avg:.12f}, "
      f"dense {dense_superoperator_favg(c3, small).f_avg:.12f}")

print("\n  m     Prob       Cost      Cost1      Cost2")
for m in (2, 5, 10, 20, 40, 80):
    c = gen_topology_circuit(g, m, seed=m)
    prob = avg_gate_fidelity(c, g).prob
    rep = cost(c, g, 7)
    print(f"{m:>3}  {prob:.6f}  {rep.cost:.6f}  {rep.cost1:.6f}  {rep.cost2:.6f}")
print("\nCost stays close to Prob.  Cost1 and Cost2 lack the alpha correction and drift as m grows.")
