"""Parity matrices and row operations over GF(2).

A CNOT circuit is fully described by its parity matrix: column ``j`` lists the
inputs XORed into output wire ``j``.  Routing works by applying row operations
to that matrix until only a permutation is left.
"""

from __future__ import annotations

from cnotroute import RowOp, apply_row_op, from_circuit, parse, rank, relabel, solve_rows
from cnotroute.gf2 import apply_row_ops, is_permutation

circuit = parse("""
qubits 4
cx 0 1
cx 2 1
cx 0 3
cx 1 3
cx 2 0
cx 1 2
cx 3 1
""")

A = from_circuit(circuit)
print("Parity matrix of the 4-qubit circuit:")
print(A)
print("rank over GF(2):", rank(A))

# Put logical qubits 0..3 on registers 3, 0, 1, 2.  Entries stay put; only labels move.
A0 = relabel(A, {0: 3, 1: 0, 2: 1, 3: 2})
print("\nAfter the qubit map (rows are input registers, columns output registers):")
print(A0)

# R(s, t) adds row s into row t, which is CNOT(t, s) appended on the left.
ops = [RowOp(3, 2), RowOp(2, 1), RowOp(2, 3), RowOp(1, 2), RowOp(0, 1)]
B = apply_row_ops(A0, ops)
print("\nColumn 1 cleared down to register 0 by", ops)
print(B)

# Which rows sum to the basis row e_1?  Those become the terminals of the row reduction.
print("\nrows summing to e_1^T:", sorted(solve_rows(B, 0, 1)))
C = apply_row_op(B, RowOp(1, 0))
print("after R(1,0):")
print(C)
print("\nrow 0 is now a basis row:", C.row_support(0) == [1])
print("a permutation matrix already?", is_permutation(C))
