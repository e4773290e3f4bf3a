from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnotroute.circuits import CnotCircuit
from cnotroute.cost import alpha
from cnotroute.errors import WidthLimit
from cnotroute.fidelity import (
    PauliLabel,
    avg_gate_fidelity,
    avg_gate_fidelity_rates,
    channel_eigenvalue,
    dense_superoperator_favg,
    nontrivial_eigenvalue,
    propagate_pauli,
)
from cnotroute.topology import Topology


I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
P0, P1 = np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)


def on_qubits(ops: dict[int, np.ndarray], n: int) -> np.ndarray:
    """Tensor product with qubit 0 as the least significant index bit."""
    out = np.eye(1)
    for q in reversed(range(n)):
        out = np.kron(out, ops.get(q, I2))
    return out


def _pauli_matrix(n: int, x: int, z: int) -> np.ndarray:
    ops = {}
    for q in range(n):
        m = I2
        if (x >> q) & 1:
            m = X @ m
        if (z >> q) & 1:
            m = m @ Z
        ops[q] = m
    return on_qubits(ops, n)


def _cnot_unitary(n: int, c: int, t: int) -> np.ndarray:
    return on_qubits({c: P0}, n) + on_qubits({c: P1, t: X}, n)


def complete(n: int, rng) -> Topology:
    return Topology(range(n), [(u, v, float(rng.uniform(0.001, 0.1)))
                               for u in range(n) for v in range(u + 1, n)])


def random_circuit(rng, n, m):
    gates = []
    for _ in range(m):
        c, t = rng.choice(n, 2, replace=False)
        gates.append((int(c), int(t)))
    return CnotCircuit(n, tuple(gates))


def test_eigenvalues():
    assert channel_eigenvalue(0.01, PauliLabel()) == 1.0
    assert nontrivial_eigenvalue(0.0) == 1.0
    assert nontrivial_eigenvalue(0.01) == pytest.approx(0.98666666666666, abs=1e-13)
    assert channel_eigenvalue(0.01, PauliLabel(x=0b100), pair=(0, 1)) == 1.0


def test_eigenvalue_matches_dense_channel():
    # Diagonal of the two-qubit channel superoperator in the Pauli basis.
    p = 0.03
    w = {(x, z): (1 - 1.25 * p if x == z == 0 else p / 12) for x in range(4) for z in range(4)}
    for qx in range(4):
        for qz in range(4):
            Q = _pauli_matrix(2, qx, qz)
            out = sum(wt * _pauli_matrix(2, x, z) @ Q @ _pauli_matrix(2, x, z).conj().T
                      for (x, z), wt in w.items())
            lam = np.trace(Q.conj().T @ out).real / 4
            expect = channel_eigenvalue(p, PauliLabel(qx, qz))
            assert lam == pytest.approx(expect, abs=1e-14)


def test_propagation_textbook_case():
    assert propagate_pauli(PauliLabel(), (0, 1)) == PauliLabel()
    assert propagate_pauli(PauliLabel(x=0b01), (0, 1)) == PauliLabel(x=0b11)
    assert propagate_pauli(PauliLabel(z=0b10), (0, 1)) == PauliLabel(z=0b11)


@pytest.mark.parametrize("gate", [(0, 1), (1, 0)])
@pytest.mark.parametrize("label", range(16))
def test_propagation_matches_matrix_conjugation(gate, label):
    x, z = label & 3, label >> 2
    U = _cnot_unitary(2, *gate)
    conj = U @ _pauli_matrix(2, x, z) @ U.conj().T
    q = propagate_pauli(PauliLabel(x, z), gate)
    M = _pauli_matrix(2, q.x, q.z)
    phase = np.trace(M.conj().T @ conj) / 4
    assert abs(abs(phase) - 1) < 1e-12
    assert np.allclose(conj, phase * M)


def test_noiseless_and_trivial_cases():
    g = Topology(range(3), [(0, 1, 0.0), (1, 2, 0.0)])
    c = CnotCircuit(3, ((0, 1), (1, 2), (0, 1)))
    assert avg_gate_fidelity(c, g).f_avg == pytest.approx(1.0, abs=1e-15)
    assert dense_superoperator_favg(CnotCircuit(2), rates=[]).f_avg == pytest.approx(1.0)
    r = dense_superoperator_favg(CnotCircuit(2, ((0, 1),)), rates=[0.05])
    assert r.f_avg == pytest.approx(0.95, abs=1e-14)


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("p", [0.001, 0.01, 0.05, 0.1])
def test_single_gate_law(n, p):
    res = avg_gate_fidelity_rates(n, [(0, 1)], [p])
    assert abs(res.f_avg - (1 - alpha(n) * p)) < 1e-12


@pytest.mark.parametrize("seed", range(40))
def test_pauli_sum_agrees_with_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    g = complete(n, rng)
    c = random_circuit(rng, n, int(rng.integers(0, 9)))
    assert avg_gate_fidelity(c, g).f_avg == pytest.approx(dense_superoperator_favg(c, g).f_avg, abs=1e-10)


def test_parallel_pairs_closed_form():
    # Two gates on disjoint pairs of a 4-qubit register, each with d = 4.
    for p0, p1 in [(0.01, 0.02), (0.05, 0.001), (0.1, 0.1)]:
        f = avg_gate_fidelity_rates(4, [(0, 1), (2, 3)], [p0, p1]).f_avg
        d0 = d1 = 4
        closed = (1 - p0 - p1 + p0 * p1
                  + ((1 - d1) * p0 + (1 - d0) * p1 + (d0 + d1) * p0 * p1) / (d0 * d1 + 1))
        assert abs(f - closed) < 1e-12


@settings(max_examples=150, deadline=None)
@given(st.integers(4, 7), st.floats(1e-4, 0.1), st.floats(1e-4, 0.1), st.data())
def test_two_gate_sandwich(n, p0, p1, data):
    pair = lambda: data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    g0, g1 = tuple(pair()), tuple(pair())
    a = alpha(n)
    f = avg_gate_fidelity_rates(n, [g0, g1], [p0, p1]).f_avg
    gap = f - (1 - a * p0) * (1 - a * p1)
    assert -1e-15 <= gap <= (1 + 1 / 2 ** (n - 1)) * a * a * p0 * p1 + 1e-15


def test_width_limits(nairobi):
    c = CnotCircuit(17, ((0, 1),))
    with pytest.raises(WidthLimit):
        avg_gate_fidelity(c, nairobi, 17)
    with pytest.raises(WidthLimit):
        dense_superoperator_favg(CnotCircuit(4), rates=[])


def test_result_fields(nairobi):
    r = avg_gate_fidelity(CnotCircuit(7, ((0, 1), (1, 2))), nairobi)
    assert r.t == 128
    assert r.prob == pytest.approx(1 - r.f_avg)
    assert 0 <= r.f_avg <= 1
