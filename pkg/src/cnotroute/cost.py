"""Fidelity-derived cost of a routed CNOT circuit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotAllowed


def alpha_exact(n: int) -> Fraction:
    """``1 + (2^(n-2) - 1) / (2^n + 1)`` as an exact rational."""
    if n < 2:
        raise ValueError("alpha is defined for widths n >= 2")
    return 1 + Fraction(2 ** (n - 2) - 1, 2 ** n + 1)


def alpha(n: int) -> float:
    """Correction turning a CNOT error rate into its n-qubit error probability."""
    return float(alpha_exact(n))


@dataclass(frozen=True)
class CostReport:
    cost: float
    cost1: float
    cost2: float
    gate_count: int
    alpha: float


def _one_minus_prod(factors: Sequence[float]) -> float:
    # Exact product for short lists, log space otherwise.
    if len(factors) <= 64:
        prod = 1.0
        for f in factors:
            prod *= f
        return 1.0 - prod
    return -math.expm1(math.fsum(math.log(f) for f in factors))


def path_cost(weights: Sequence[float], alpha: float) -> float:
    """``1 - prod(1 - alpha p_i)``."""
    for p in weights:
        if alpha * p >= 1.0:
            raise ValueError(f"alpha * p = {alpha * p} must be below 1")
    return _one_minus_prod([1.0 - alpha * p for p in weights])


def gate_error_rates(circuit, g) -> list[float]:
    rates = []
    for k, (c, t) in enumerate(circuit.gates):
        if not g.has_edge(c, t):
            raise NotAllowed(k, (c, t))
        rates.append(g.weight(c, t))
    return rates


def cost(circuit, g, n: int | None = None, alpha_value: float | None = None) -> CostReport:
    """Cost, Cost1 and Cost2 of ``circuit`` on topology ``g`` at width ``n``."""
    ps = gate_error_rates(circuit, g)
    if alpha_value is None:
        alpha_value = alpha(n if n is not None else circuit.n)
    return CostReport(
        cost=path_cost(ps, alpha_value),
        cost1=math.fsum(ps),
        cost2=_one_minus_prod([1.0 - p for p in ps]),
        gate_count=len(ps),
        alpha=alpha_value,
    )
