"""Exception types shared across the package."""

from __future__ import annotations


class CnotRouteError(Exception):
    """Base class for all package errors."""


class UnknownLabel(CnotRouteError, KeyError):
    """A register label is not present in the matrix or graph."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class IndexOutOfRange(CnotRouteError, ValueError):
    """A gate index exceeds the declared register size."""


class CircuitSyntaxError(CnotRouteError, ValueError):
    """Malformed circuit text. Carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NonCnotGate(CircuitSyntaxError):
    """A qasm-lite file contains a gate other than cx."""


class WidthMismatch(CnotRouteError, ValueError):
    pass


class NotInjective(CnotRouteError, ValueError):
    pass


class BackendFormatError(CnotRouteError, ValueError):
    pass


class Disconnected(CnotRouteError, ValueError):
    pass


class CutVertex(CnotRouteError, ValueError):
    pass


class NotAllowed(CnotRouteError, ValueError):
    """A gate acts on a pair of registers that is not an edge of the topology."""

    def __init__(self, index: int, gate: tuple[int, int]):
        super().__init__(f"gate {index} {gate} is not on a topology edge")
        self.index = index
        self.gate = gate


class WidthLimit(CnotRouteError, ValueError):
    pass


class SynthesisError(CnotRouteError, RuntimeError):
    """Internal invariant violated during synthesis."""
