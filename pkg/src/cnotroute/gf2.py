"""Labelled parity matrices over GF(2).

Rows are stored bit-packed as Python integers (bit ``k`` is the column at
position ``k``), so a row operation is a single XOR.  Row and column labels are
kept alongside the bits because reductions address registers by label, and
after a qubit map the row and column label sets need not be positions.

Entry ``(i, j)`` is 1 when input register ``i`` participates in the output
parity of wire ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, NotInjective, SynthesisError, UnknownLabel


@dataclass(frozen=True)
class RowOp:
    """``R(source, target)``: row ``target`` becomes row ``target`` XOR row ``source``."""

    source: int
    target: int

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f"row operation needs distinct rows, got {self.source}")

    def __repr__(self) -> str:
        return f"R({self.source},{self.target})"


class ParityMatrix:
    """Square GF(2) matrix with explicit row and column labels."""

    __slots__ = ("_rows", "row_labels", "col_labels", "_rpos", "_cpos")

    def __init__(self, bits, row_labels: Sequence[int] | None = None,
                 col_labels: Sequence[int] | None = None):
        arr = np.asarray(bits, dtype=np.uint8) % 2
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"parity matrix must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n == 0:
            raise ValueError("parity matrix must have dimension at least 1")
        self.row_labels = tuple(range(n)) if row_labels is None else tuple(int(x) for x in row_labels)
        self.col_labels = tuple(range(n)) if col_labels is None else tuple(int(x) for x in col_labels)
        if len(self.row_labels) != n or len(self.col_labels) != n:
            raise ValueError("label count does not match dimension")
        if len(set(self.row_labels)) != n or len(set(self.col_labels)) != n:
            raise NotInjective("labels must be distinct")
        self._rows = [sum(1 << j for j in np.flatnonzero(row).tolist()) for row in arr]
        self._rpos = {lab: i for i, lab in enumerate(self.row_labels)}
        self._cpos = {lab: i for i, lab in enumerate(self.col_labels)}

    @classmethod
    def _from_rows(cls, rows: list[int], row_labels, col_labels) -> "ParityMatrix":
        obj = cls.__new__(cls)
        obj._rows = list(rows)
        obj.row_labels = tuple(row_labels)
        obj.col_labels = tuple(col_labels)
        obj._rpos = {lab: i for i, lab in enumerate(obj.row_labels)}
        obj._cpos = {lab: i for i, lab in enumerate(obj.col_labels)}
        return obj

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def bits(self) -> np.ndarray:
        n = self.n
        out = np.zeros((n, n), dtype=np.uint8)
        for i, r in enumerate(self._rows):
            for j in range(n):
                out[i, j] = (r >> j) & 1
        return out

    def copy(self) -> "ParityMatrix":
        return ParityMatrix._from_rows(self._rows, self.row_labels, self.col_labels)

    def row_pos(self, label: int) -> int:
        try:
            return self._rpos[label]
        except KeyError:
            raise UnknownLabel(f"no row labelled {label}") from None

    def col_pos(self, label: int) -> int:
        try:
            return self._cpos[label]
        except KeyError:
            raise UnknownLabel(f"no column labelled {label}") from None

    def row_bits(self, label: int) -> int:
        """Packed bits of the row with the given label."""
        return self._rows[self.row_pos(label)]

    def col_mask(self, labels: Iterable[int]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.col_pos(lab)
        return m

    def entry(self, row: int, col: int) -> int:
        return (self._rows[self.row_pos(row)] >> self.col_pos(col)) & 1

    def column_support(self, col: int, rows: Iterable[int] | None = None) -> list[int]:
        """Row labels with a 1 in column ``col``, in row order."""
        j = self.col_pos(col)
        labels = self.row_labels if rows is None else rows
        return [r for r in labels if (self._rows[self.row_pos(r)] >> j) & 1]

    def row_support(self, row: int, cols: Iterable[int] | None = None) -> list[int]:
        bitsr = self._rows[self.row_pos(row)]
        labels = self.col_labels if cols is None else cols
        return [c for c in labels if (bitsr >> self.col_pos(c)) & 1]

    def xor_row(self, source: int, target: int) -> None:
        """In-place ``R(source, target)``."""
        if source == target:
            raise ValueError("row operation needs distinct rows")
        s, t = self.row_pos(source), self.row_pos(target)
        self._rows[t] ^= self._rows[s]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParityMatrix):
            return NotImplemented
        if set(self.row_labels) != set(other.row_labels) or set(self.col_labels) != set(other.col_labels):
            return False
        return all(
            self.entry(r, c) == other.entry(r, c) for r in self.row_labels for c in self.col_labels
        )

    def __hash__(self):
        return hash((self.row_labels, self.col_labels, tuple(self._rows)))

    def __repr__(self) -> str:
        lines = [f"ParityMatrix(rows={list(self.row_labels)}, cols={list(self.col_labels)})"]
        for lab, r in zip(self.row_labels, self._rows):
            lines.append(f"  {lab}: " + "".join(str((r >> j) & 1) for j in range(self.n)))
        return "\n".join(lines)


def identity(n: int, labels: Sequence[int] | None = None) -> ParityMatrix:
    if n < 1:
        raise ValueError("dimension must be at least 1")
    labels = tuple(range(n)) if labels is None else tuple(labels)
    pos = range(n)
    return ParityMatrix._from_rows([1 << i for i in pos], labels, labels)


def apply_row_op(A: ParityMatrix, op: RowOp) -> ParityMatrix:
    out = A.copy()
    out.xor_row(op.source, op.target)
    return out


def apply_row_ops(A: ParityMatrix, ops: Iterable[RowOp]) -> ParityMatrix:
    out = A.copy()
    for op in ops:
        out.xor_row(op.source, op.target)
    return out


def from_circuit(circuit, n: int | None = None) -> ParityMatrix:
    """Parity matrix of a CNOT circuit.

    Starting from the identity, ``CNOT(c, t)`` adds column ``c`` into column
    ``t``.  In row-packed form that is: every row with bit ``c`` set flips
    bit ``t``.
    """
    gates = getattr(circuit, "gates", circuit)
    if n is None:
        n = circuit.n
    rows = [1 << i for i in range(n)]
    for c, t in gates:
        if not (0 <= c < n and 0 <= t < n):
            raise IndexOutOfRange(f"gate ({c},{t}) out of range for {n} qubits")
        for i in range(n):
            if (rows[i] >> c) & 1:
                rows[i] ^= 1 << t
    labels = tuple(range(n))
    return ParityMatrix._from_rows(rows, labels, labels)


def rank(A) -> int:
    """GF(2) rank by Gaussian elimination on a copy."""
    if isinstance(A, ParityMatrix):
        rows = list(A._rows)
    else:
        arr = np.asarray(A, dtype=np.uint8) % 2
        rows = [int("".join(str(b) for b in row[::-1]) or "0", 2) for row in arr]
    r = 0
    basis: list[int] = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            r += 1
    return r


def is_permutation(A: ParityMatrix) -> bool:
    n = A.n
    seen = 0
    for r in A._rows:
        if r == 0 or r & (r - 1):
            return False
        seen |= r
    return seen == (1 << n) - 1


def relabel(A: ParityMatrix, phi) -> ParityMatrix:
    """Replace row and column labels ``i`` by ``phi[i]``; entries unchanged."""
    get = phi.__getitem__
    rows = [get(x) for x in A.row_labels]
    cols = [get(x) for x in A.col_labels]
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise NotInjective("map is not injective over the matrix labels")
    return ParityMatrix._from_rows(A._rows, rows, cols)


def verify_synthesis(A: ParityMatrix, ops: Iterable[RowOp], P: ParityMatrix) -> bool:
    """True iff applying ``ops`` left to right to ``A`` yields ``P``."""
    if not is_permutation(P):
        return False
    return apply_row_ops(A, ops) == P


def solve_rows(A: ParityMatrix, pivot_row: int, pivot_col: int,
               active: Iterable[int] | None = None) -> set[int]:
    """Rows among ``active`` whose XOR equals the basis row of ``pivot_col``.

    Columns that were already reduced away are zero on every active row, so
    the full column range can be used.
    """
    rows = list(A.row_labels) if active is None else list(active)
    return solve_rows_masked(A, pivot_row, pivot_col, rows, (1 << A.n) - 1)


def solve_rows_masked(A: ParityMatrix, pivot_row: int, pivot_col: int,
                      rows: Sequence[int], cmask: int) -> set[int]:
    """Solve ``x^T A = e_c^T`` over the given rows and column mask."""
    target = 1 << A.col_pos(pivot_col)
    if not target & cmask:
        raise UnknownLabel(f"column {pivot_col} is not active")
    if pivot_row not in rows:
        raise UnknownLabel(f"row {pivot_row} is not active")
    # Elimination with a record of which original rows make up each pivot row.
    pivots: list[tuple[int, int, int]] = []  # (lowbit, value, combo)
    order = {r: k for k, r in enumerate(rows)}
    for r in rows:
        v = A.row_bits(r) & cmask
        combo = 1 << order[r]
        for low, pv, pc in pivots:
            if v & low:
                v ^= pv
                combo ^= pc
        if v:
            low = v & -v
            # Keep earlier pivots reduced against the new one.
            pivots = [(l2, pv ^ v, pc ^ combo) if pv & low else (l2, pv, pc)
                      for l2, pv, pc in pivots]
            pivots.append((low, v, combo))
    t = target
    combo = 0
    for low, pv, pc in pivots:
        if t & low:
            t ^= pv
            combo ^= pc
    if t:
        raise SynthesisError("row system has no solution; matrix is not full rank")
    chosen = {rows[k] for k in range(len(rows)) if (combo >> k) & 1}
    if pivot_row not in chosen:
        raise SynthesisError("pivot row missing from row solution")
    return chosen
