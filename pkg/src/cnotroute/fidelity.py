"""Exact average gate fidelity of a noisy CNOT circuit.

Noise model: each CNOT is followed by a two-qubit Pauli channel on its pair,
identity with weight ``1 - 5p/4`` and each of the 15 non-identity Paulis with
weight ``p/12``.  A lone gate then has average fidelity exactly ``1 - p`` on its
own two qubits.  Idle qubits are noiseless.

Every error channel is pushed to the end of the circuit by conjugating it
through the remaining ideal gates.  CNOTs map Paulis to Paulis, so the total
error channel is diagonal in the Pauli basis and its superoperator trace is a
sum over the ``4^n`` Pauli labels of products of per-gate eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cost import gate_error_rates
from .errors import WidthLimit

ORACLE_MAX_WIDTH = 16
_CHUNK = 1 << 20


@dataclass(frozen=True)
class PauliLabel:
    """Pauli string up to phase: bit ``q`` of ``x`` / ``z`` is the X / Z part on qubit ``q``."""

    x: int = 0
    z: int = 0

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def restricted(self, qubits) -> "PauliLabel":
        mask = 0
        for q in qubits:
            mask |= 1 << q
        return PauliLabel(self.x & mask, self.z & mask)


@dataclass(frozen=True)
class FidelityResult:
    f_avg: float
    prob: float
    trace_s: float
    t: int


def identity_weight(p: float) -> float:
    return 1.0 - 5.0 * p / 4.0


def nontrivial_eigenvalue(p: float) -> float:
    """Pauli-basis eigenvalue of the gate channel on any non-identity label of its pair.

    Seven of the 15 non-identity Paulis commute with a fixed non-identity
    Pauli and eight anticommute, giving ``P0 - (1 - P0)/15``.
    """
    p0 = identity_weight(p)
    return (16.0 * p0 - 1.0) / 15.0


def channel_eigenvalue(p: float, q: PauliLabel, pair: tuple[int, int] | None = None) -> float:
    if pair is not None:
        q = q.restricted(pair)
    return 1.0 if q.is_identity() else nontrivial_eigenvalue(p)


def propagate_pauli(q: PauliLabel, gate: tuple[int, int]) -> PauliLabel:
    """Conjugate ``q`` by ``CNOT(c, t)``: ``x_t ^= x_c`` and ``z_c ^= z_t``."""
    c, t = gate
    x = q.x ^ (((q.x >> c) & 1) << t)
    z = q.z ^ (((q.z >> t) & 1) << c)
    return PauliLabel(x, z)


def favg_from_trace(trace_s: float, n: int) -> float:
    t = 2 ** n
    return trace_s / (t * (t + 1)) + 1.0 / (t + 1)


def _trace_chunk(start: int, stop: int, n: int, gates, lams) -> float:
    idx = np.arange(start, stop, dtype=np.int64)
    mask = (1 << n) - 1
    x = idx & mask
    z = idx >> n
    prod = np.ones(stop - start, dtype=np.float64)
    # Walk backward: the error after gate k sees the label conjugated by gates k+1..m-1.
    for (c, t), lam in zip(reversed(gates), reversed(lams)):
        pair = (1 << c) | (1 << t)
        hit = ((x | z) & pair) != 0
        prod *= np.where(hit, lam, 1.0)
        x ^= ((x >> c) & 1) << t
        z ^= ((z >> t) & 1) << c
    return math.fsum(np.sort(prod))


def pauli_trace(n: int, gates, rates) -> float:
    """``Tr[S]`` of the pushed-through error channel by the Pauli-label sum."""
    lams = [nontrivial_eigenvalue(p) for p in rates]
    total = 4 ** n
    parts = [
        _trace_chunk(s, min(s + _CHUNK, total), n, list(gates), lams)
        for s in range(0, total, _CHUNK)
    ]
    return math.fsum(parts)


def avg_gate_fidelity(circuit, g, n: int | None = None, max_width: int = ORACLE_MAX_WIDTH) -> FidelityResult:
    """Average gate fidelity of ``circuit`` with error rates read off topology ``g``.

    ``n`` is the width of the register space; gates use labels ``0..n-1``.
    """
    n = circuit.n if n is None else n
    if n > max_width:
        raise WidthLimit(f"width {n} exceeds oracle limit {max_width}")
    rates = gate_error_rates(circuit, g)
    tr = pauli_trace(n, circuit.gates, rates)
    f = favg_from_trace(tr, n)
    return FidelityResult(f_avg=f, prob=1.0 - f, trace_s=tr, t=2 ** n)


def avg_gate_fidelity_rates(n: int, gates, rates) -> FidelityResult:
    """Same as :func:`avg_gate_fidelity` with explicit per-gate error rates."""
    tr = pauli_trace(n, gates, rates)
    f = favg_from_trace(tr, n)
    return FidelityResult(f_avg=f, prob=1.0 - f, trace_s=tr, t=2 ** n)


# --- dense brute force -----------------------------------------------------

def _cnot_unitary(n: int, c: int, t: int) -> np.ndarray:
    d = 2 ** n
    u = np.zeros((d, d), dtype=complex)
    for i in range(d):
        u[i ^ (((i >> c) & 1) << t), i] = 1.0
    return u


def _pauli_matrix(n: int, x: int, z: int) -> np.ndarray:
    """``X^x Z^z`` as a dense matrix (global phase irrelevant for channels)."""
    d = 2 ** n
    m = np.zeros((d, d), dtype=complex)
    for i in range(d):
        m[i ^ x, i] = (-1) ** bin(i & z).count("1")
    return m


def _gate_superop(n: int, c: int, t: int, p: float) -> np.ndarray:
    u = _cnot_unitary(n, c, t)
    p0 = identity_weight(p)
    s = np.zeros((4 ** n, 4 ** n), dtype=complex)
    for xs in range(4):
        for zs in range(4):
            x = ((xs & 1) << c) | ((xs >> 1) << t)
            z = ((zs & 1) << c) | ((zs >> 1) << t)
            w = p0 if (x == 0 and z == 0) else p / 12.0
            k = np.sqrt(w) * _pauli_matrix(n, x, z) @ u
            s += np.kron(k.conj(), k)
    return s


def dense_superoperator_favg(circuit, g=None, n: int | None = None, rates=None) -> FidelityResult:
    """Brute-force oracle for ``n <= 3``: explicit Kraus superoperators.

    Builds ``S = sum_k conj(M_k) (x) M_k`` for each noisy gate, multiplies them
    in circuit order, composes with the superoperator of the inverse ideal
    unitary and applies the trace formula.
    """
    n = circuit.n if n is None else n
    if n > 3:
        raise WidthLimit("dense oracle is limited to n <= 3")
    if rates is None:
        rates = gate_error_rates(circuit, g)
    d = 2 ** n
    s_total = np.eye(d * d, dtype=complex)
    u_total = np.eye(d, dtype=complex)
    for (c, t), p in zip(circuit.gates, rates):
        s_total = _gate_superop(n, c, t, p) @ s_total
        u_total = _cnot_unitary(n, c, t) @ u_total
    inv = u_total.conj().T
    s_inv = np.kron(inv.conj(), inv)
    tr = float(np.trace(s_inv @ s_total).real)
    f = favg_from_trace(tr, n)
    return FidelityResult(f_avg=f, prob=1.0 - f, trace_s=tr, t=d)
