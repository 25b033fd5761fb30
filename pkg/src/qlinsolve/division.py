"""Division ``m * x = y`` as a QUBO, single-shot and with residual refinement."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .anneal import make_solver
from .encoding import BinaryEncoding, decode, exponent_offset
from .qubo_core import QuboModel, scale_by_max_coupling

__all__ = [
    "DivisionProblem",
    "DivisionResult",
    "IterationRecord",
    "IterationTrace",
    "build_division_qubo",
    "solve_division",
    "iterate_division",
]


@dataclass(frozen=True)
class DivisionProblem:
    m: float
    y: float
    enc: BinaryEncoding = BinaryEncoding()

    def __post_init__(self):
        if self.m == 0:
            raise ZeroDivisionError("divisor m must be nonzero")


@dataclass(frozen=True)
class DivisionResult:
    x: float
    bits: np.ndarray
    scaled_energy: float
    raw_objective: float
    offset_applied: int = 0


def build_division_qubo(p: DivisionProblem) -> QuboModel:
    """Unscaled QUBO of ``(m*x - y)**2`` with ``x = c*chi - d``.

    Expanding ``(m c chi - (m d + y))**2`` and folding ``Q_r**2 = Q_r`` gives
    weights ``m^2 c^2 4^-r - 2 m c (m d + y) 2^-r`` and pair coefficients
    ``m^2 c^2 2^-(r+s)``; the constant is ``(m d + y)**2``.
    """
    m, y = float(p.m), float(p.y)
    c, d = p.enc.c, p.enc.d
    pv = p.enc.place_values
    weights = m * m * c * c * pv * pv - 2.0 * m * c * (m * d + y) * pv
    R = p.enc.R
    couplings = {(r, s): m * m * c * c * pv[r] * pv[s] for r in range(R) for s in range(r + 1, R)}
    return QuboModel(weights, couplings, constant=(m * d + y) ** 2)


def solve_division(p: DivisionProblem, solver="brute") -> DivisionResult:
    model = scale_by_max_coupling(build_division_qubo(p)) if p.enc.R > 1 else build_division_qubo(p)
    outcome = make_solver(solver)(model)
    x = decode(outcome.state, p.enc)
    return DivisionResult(
        x=x,
        bits=np.asarray(outcome.state, dtype=np.uint8),
        scaled_energy=float(outcome.energy),
        raw_objective=(p.m * x - p.y) ** 2,
    )


@dataclass(frozen=True)
class IterationRecord:
    x: float  # partial quotient in original units
    residual: float  # dividend left after this round
    offset: int
    bits: np.ndarray
    scaled_energy: float


@dataclass
class IterationTrace:
    y: float
    m: float
    records: list[IterationRecord] = field(default_factory=list)
    solution: float = 0.0
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def error(self) -> float:
        return abs(self.records[-1].residual) if self.records else abs(self.y)


def iterate_division(
    y: float,
    m: float,
    tol: float = 1e-6,
    max_iter: int = 50,
    solver="brute",
    enc: BinaryEncoding = BinaryEncoding(),
) -> IterationTrace:
    """Refine ``y/m`` by solving for the residual until ``|y_n| <= tol*max(1, |y|)``.

    Each round shifts the residual by a power-of-two offset so that the
    scaled quotient lies in (-1, 1]; partial quotients are accumulated
    additively.
    """
    if m == 0:
        raise ZeroDivisionError("divisor m must be nonzero")
    if not tol > 0:
        raise ValueError("tol must be positive")
    trace = IterationTrace(y=float(y), m=float(m))
    threshold = tol * max(1.0, abs(y))
    residual = float(y)
    solve = make_solver(solver)
    while abs(residual) > threshold and trace.iterations < max_iter:
        off = exponent_offset(residual, m)
        step = solve_division(DivisionProblem(m, off.shift(residual), enc), solve)
        x_n = off.unshift(step.x)
        residual = residual - m * x_n
        trace.solution += x_n
        trace.records.append(IterationRecord(x_n, residual, off.offset, step.bits, step.scaled_energy))
    trace.converged = abs(residual) <= threshold
    return trace
