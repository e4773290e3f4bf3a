from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnotroute.errors import NotInjective, UnknownLabel
from cnotroute.gf2 import (
    ParityMatrix,
    RowOp,
    apply_row_op,
    apply_row_ops,
    from_circuit,
    identity,
    is_permutation,
    rank,
    relabel,
    solve_rows,
    verify_synthesis,
)

# Four-qubit example: logical circuit, then the map 0->3, 1->0, 2->1, 3->2.
EXAMPLE_GATES = [(0, 1), (2, 1), (0, 3), (1, 3), (2, 0), (1, 2), (3, 1)]
EXAMPLE_PHI = {0: 3, 1: 0, 2: 1, 3: 2}
EXAMPLE_A = [[1, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1], [0, 1, 0, 1]]
LABELS = [3, 0, 1, 2]
FIRST_COLUMN_OPS = [RowOp(3, 2), RowOp(2, 1), RowOp(2, 3), RowOp(1, 2), RowOp(0, 1)]
AFTER_COLUMN = [[0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1], [1, 0, 0, 1]]
AFTER_ROW = [[0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 1]]


def random_gates(rng, n, m):
    out = []
    for _ in range(m):
        c, t = rng.choice(n, size=2, replace=False)
        out.append((int(c), int(t)))
    return out


def brute_rank(bits):
    """Rank over GF(2) as the log2 of the row-space size."""
    rows = [int("".join(map(str, r)), 2) for r in bits]
    span = {0}
    for r in rows:
        span |= {x ^ r for x in span}
    return len(span).bit_length() - 1


gates_st = st.integers(2, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                 .filter(lambda g: g[0] != g[1]), max_size=40),
    )
)


def test_parity_matrix_of_example_circuit():
    A = from_circuit(EXAMPLE_GATES, 4)
    assert A == ParityMatrix(EXAMPLE_A)


def test_relabel_gives_printed_mapped_matrix():
    A0 = relabel(from_circuit(EXAMPLE_GATES, 4), EXAMPLE_PHI)
    assert A0 == ParityMatrix(EXAMPLE_A, LABELS, LABELS)
    assert A0.entry(3, 3) == 1 and A0.entry(0, 3) == 0


def test_column_ops_reproduce_printed_intermediate():
    A0 = relabel(from_circuit(EXAMPLE_GATES, 4), EXAMPLE_PHI)
    B = apply_row_ops(A0, FIRST_COLUMN_OPS)
    assert B == ParityMatrix(AFTER_COLUMN, LABELS, LABELS)
    assert apply_row_op(B, RowOp(1, 0)) == ParityMatrix(AFTER_ROW, LABELS, LABELS)


def test_equality_ignores_label_order():
    A = ParityMatrix(EXAMPLE_A, LABELS, LABELS)
    perm = [1, 2, 3, 0]
    bits = np.array(EXAMPLE_A)[np.ix_(perm, perm)]
    assert A == ParityMatrix(bits, [LABELS[i] for i in perm], [LABELS[i] for i in perm])


def test_example_permutation_is_verified():
    P = ParityMatrix(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [3, 0, 1, 2], [0, 1, 2, 3],
    )
    assert is_permutation(P)
    assert not is_permutation(ParityMatrix(EXAMPLE_A))


def test_apply_row_op_is_pure_and_checks_labels():
    A = identity(3)
    B = apply_row_op(A, RowOp(0, 2))
    assert A == identity(3)
    assert B.row_support(2) == [0, 2]
    with pytest.raises(UnknownLabel):
        apply_row_op(A, RowOp(0, 9))


def test_relabel_rejects_non_injective_map():
    with pytest.raises(NotInjective):
        relabel(identity(3), {0: 1, 1: 1, 2: 2})


def test_rank_small_cases():
    assert rank(identity(5)) == 5
    assert rank(ParityMatrix([[1, 1], [1, 1]])) == 1
    assert rank(ParityMatrix([[0, 0], [0, 0]])) == 0


@settings(max_examples=200, deadline=None)
@given(gates_st)
def test_circuits_give_full_rank(case):
    n, gates = case
    assert rank(from_circuit(gates, n)) == n


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_rank_matches_span_oracle(bits):
    assert rank(ParityMatrix(bits)) == brute_rank(bits)


@settings(max_examples=200, deadline=None)
@given(gates_st, st.data())
def test_row_op_is_an_involution_and_keeps_rank(case, data):
    n, gates = case
    A = from_circuit(gates, n)
    s = data.draw(st.integers(0, n - 1))
    t = data.draw(st.integers(0, n - 1).filter(lambda x: x != s))
    B = apply_row_op(A, RowOp(s, t))
    assert rank(B) == rank(A)
    assert apply_row_op(B, RowOp(s, t)) == A


@settings(max_examples=100, deadline=None)
@given(gates_st)
def test_gate_list_as_row_ops_reduces_to_identity(case):
    n, gates = case
    A = from_circuit(gates, n)
    # A is a product of gate matrices in circuit order, and CNOT(c, t) equals R(t, c).
    undo = [RowOp(t, c) for c, t in gates]
    assert verify_synthesis(A, undo, identity(n))


def solve_rows_oracle(A, r, c, active):
    target = 1 << A.col_pos(c)
    hits = []
    others = [x for x in active if x != r]
    for k in range(len(others) + 1):
        for combo in itertools.combinations(others, k):
            acc = A.row_bits(r)
            for x in combo:
                acc ^= A.row_bits(x)
            if acc == target:
                hits.append({r, *combo})
    return hits


@pytest.mark.parametrize("seed", range(40))
def test_solve_rows_agrees_with_subset_search(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    A = from_circuit(random_gates(rng, n, int(rng.integers(0, 25))), n)
    r, c = int(rng.integers(n)), int(rng.integers(n))
    # Precondition: column c is already e_r.
    if not A.entry(r, c):
        A = apply_row_op(A, RowOp(A.column_support(c)[0], r))
    for x in A.column_support(c):
        if x != r:
            A = apply_row_op(A, RowOp(r, x))
    got = solve_rows(A, r, c)
    assert got in solve_rows_oracle(A, r, c, list(range(n)))


def test_solve_rows_example_step():
    A00 = ParityMatrix(AFTER_COLUMN, LABELS, LABELS)
    assert solve_rows(A00, 0, 1) == {0, 1}
