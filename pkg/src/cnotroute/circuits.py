"""CNOT circuits, qubit maps, and the two on-disk text formats.

``simple`` format::

    # comment
    qubits 3
    cx 0 1
    cx 2 1

``qasm-lite`` is the slice of OpenQASM 2.0 made of a version header, an
optional ``include``, a single ``qreg`` and ``cx`` statements.  Any other gate
is rejected rather than dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    CircuitSyntaxError,
    IndexOutOfRange,
    NonCnotGate,
    NotInjective,
    UnknownLabel,
    WidthMismatch,
)
from .gf2 import RowOp

Gate = tuple[int, int]


@dataclass(frozen=True)
class CnotCircuit:
    """Ordered CNOT gates ``(control, target)`` on ``n`` registers."""

    n: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one register")
        gates = tuple((int(c), int(t)) for c, t in self.gates)
        for k, (c, t) in enumerate(gates):
            if c == t:
                raise ValueError(f"gate {k} has control equal to target ({c})")
            if not (0 <= c < self.n and 0 <= t < self.n):
                raise IndexOutOfRange(f"gate {k} ({c},{t}) out of range for {self.n} qubits")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def reverse(self) -> "CnotCircuit":
        """The inverse circuit (each CNOT is self-inverse)."""
        return CnotCircuit(self.n, self.gates[::-1])


class QubitMap:
    """Injective map from logical index to physical register label."""

    def __init__(self, phi: Sequence[int] | Mapping[int, int]):
        if isinstance(phi, Mapping):
            self.phi = {int(k): int(v) for k, v in phi.items()}
        else:
            self.phi = {i: int(v) for i, v in enumerate(phi)}
        if len(set(self.phi.values())) != len(self.phi):
            raise NotInjective(f"qubit map {self.phi} is not injective")

    def __getitem__(self, i: int) -> int:
        try:
            return self.phi[i]
        except KeyError:
            raise UnknownLabel(f"logical qubit {i} is not mapped") from None

    def __len__(self) -> int:
        return len(self.phi)

    def image(self) -> list[int]:
        return [self.phi[i] for i in sorted(self.phi)]

    def __repr__(self) -> str:
        return f"QubitMap({self.image()})"

    @classmethod
    def identity(cls, n: int) -> "QubitMap":
        return cls(list(range(n)))


def compose(a: CnotCircuit, b: CnotCircuit) -> CnotCircuit:
    if a.n != b.n:
        raise WidthMismatch(f"cannot compose widths {a.n} and {b.n}")
    return CnotCircuit(a.n, a.gates + b.gates)


def apply_map(c: CnotCircuit, m: QubitMap | Sequence[int], n: int | None = None) -> CnotCircuit:
    """Relabel every gate ``(i, j)`` to ``(phi(i), phi(j))``.

    The result's register count is ``n`` if given, else one more than the
    largest physical label.
    """
    if not isinstance(m, QubitMap):
        m = QubitMap(m)
    gates = tuple((m[i], m[j]) for i, j in c.gates)
    width = n if n is not None else max(max(m.image()) + 1, 1)
    return CnotCircuit(width, gates)


def ops_to_circuit(ops: Iterable[RowOp], n: int) -> CnotCircuit:
    """Each ``R(i, j)`` becomes ``CNOT(j, i)``, kept in application order."""
    return CnotCircuit(n, tuple((op.target, op.source) for op in ops))


# --- parsing ---------------------------------------------------------------

_SIMPLE_HEADER = re.compile(r"^qubits\s+(\d+)$")
_SIMPLE_GATE = re.compile(r"^cx\s+(\d+)\s+(\d+)$")


def _parse_simple(text: str) -> CnotCircuit:
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.find(line[0]) + 1
        if n is None:
            m = _SIMPLE_HEADER.match(line)
            if not m:
                raise CircuitSyntaxError("expected 'qubits N' header", lineno, col)
            n = int(m.group(1))
            if n < 1:
                raise CircuitSyntaxError("register count must be positive", lineno, col)
            continue
        m = _SIMPLE_GATE.match(line)
        if not m:
            raise CircuitSyntaxError(f"expected 'cx A B', got {line!r}", lineno, col)
        c, t = int(m.group(1)), int(m.group(2))
        if c >= n or t >= n:
            raise IndexOutOfRange(f"line {lineno}: gate ({c},{t}) out of range for {n} qubits")
        if c == t:
            raise CircuitSyntaxError("control equals target", lineno, col)
        gates.append((c, t))
    if n is None:
        raise CircuitSyntaxError("missing 'qubits N' header", 1, 1)
    return CnotCircuit(n, tuple(gates))


_QASM_VERSION = re.compile(r"^OPENQASM\s+2\.0$")
_QASM_INCLUDE = re.compile(r'^include\s+"[^"]+"$')
_QASM_QREG = re.compile(r"^qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_QASM_CX = re.compile(
    r"^(?:cx|CX)\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*,\s*([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$"
)
_QASM_WORD = re.compile(r"^([A-Za-z_]\w*)")


def _qasm_statements(text: str):
    """Yield ``(statement, line, column)`` with comments stripped."""
    buf = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for colno, ch in enumerate(line, start=1):
            if ch == ";":
                stmt = "".join(buf).strip()
                if not stmt:
                    raise CircuitSyntaxError("empty statement", lineno, colno)
                yield stmt, start[0], start[1]
                buf, start = [], None
                continue
            if start is None:
                if ch.isspace():
                    continue
                start = (lineno, colno)
            buf.append(ch)
        if buf:
            buf.append(" ")
    rest = "".join(buf).strip()
    if rest:
        raise CircuitSyntaxError("missing ';' at end of statement", start[0], start[1])


def _parse_qasm(text: str) -> CnotCircuit:
    n = None
    reg = None
    seen_version = False
    gates: list[Gate] = []
    for stmt, line, col in _qasm_statements(text):
        stmt = " ".join(stmt.split())
        if not seen_version:
            if not _QASM_VERSION.match(stmt):
                raise CircuitSyntaxError("expected 'OPENQASM 2.0;' header", line, col)
            seen_version = True
            continue
        if _QASM_INCLUDE.match(stmt):
            if n is not None:
                raise CircuitSyntaxError("include must precede qreg", line, col)
            continue
        m = _QASM_QREG.match(stmt)
        if m:
            if n is not None:
                raise CircuitSyntaxError("only one qreg is allowed", line, col)
            reg, n = m.group(1), int(m.group(2))
            if n < 1:
                raise CircuitSyntaxError("register size must be positive", line, col)
            continue
        m = _QASM_CX.match(stmt)
        if m:
            if n is None:
                raise CircuitSyntaxError("cx before qreg declaration", line, col)
            r1, c, r2, t = m.group(1), int(m.group(2)), m.group(3), int(m.group(4))
            if r1 != reg or r2 != reg:
                raise CircuitSyntaxError(f"unknown register in {stmt!r}", line, col)
            if c >= n or t >= n:
                raise IndexOutOfRange(f"line {line}: gate ({c},{t}) out of range for {n} qubits")
            if c == t:
                raise CircuitSyntaxError("control equals target", line, col)
            gates.append((c, t))
            continue
        w = _QASM_WORD.match(stmt)
        if w and w.group(1) not in ("qreg", "include", "OPENQASM", "cx", "CX"):
            raise NonCnotGate(f"unsupported statement {w.group(1)!r}", line, col)
        raise CircuitSyntaxError(f"cannot parse {stmt!r}", line, col)
    if not seen_version:
        raise CircuitSyntaxError("missing 'OPENQASM 2.0;' header", 1, 1)
    if n is None:
        raise CircuitSyntaxError("missing qreg declaration", 1, 1)
    return CnotCircuit(n, tuple(gates))


def parse(text: str, format: str = "simple") -> CnotCircuit:
    if format == "simple":
        return _parse_simple(text)
    if format in ("qasm", "qasm-lite"):
        return _parse_qasm(text)
    raise ValueError(f"unknown circuit format {format!r}")


def emit(c: CnotCircuit, format: str = "simple") -> str:
    if format == "simple":
        lines = [f"qubits {c.n}"] + [f"cx {a} {b}" for a, b in c.gates]
    elif format in ("qasm", "qasm-lite"):
        lines = ["OPENQASM 2.0;", f"qreg q[{c.n}];"] + [f"cx q[{a}],q[{b}];" for a, b in c.gates]
    else:
        raise ValueError(f"unknown circuit format {format!r}")
    return "\n".join(lines) + "\n"


def guess_format(path: str) -> str:
    return "qasm-lite" if str(path).endswith(".qasm") else "simple"
