"""Linear systems ``M x = Y`` as QUBOs over ``N*R`` logical qubits.

Qubit ``l = i*R + r`` holds bit ``r`` of component ``x_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .anneal import make_solver
from .chimera import BrokenChainError
from .encoding import BinaryEncoding, exponent_offset
from .qubo_core import QuboModel, scale_by_max_coupling

__all__ = [
    "SingularMatrixError",
    "MatrixProblem",
    "LinearSolution",
    "IndexMap",
    "InversionResult",
    "LinearTrace",
    "linear_index",
    "inverse_index",
    "build_linear_qubo",
    "reconstruct_solution",
    "solve_linear",
    "invert_matrix",
    "iterate_linear",
    "condition_number",
    "singular_value_bounds",
    "read_problem",
    "write_problem",
    "parse_problem",
    "format_problem",
]

SINGULAR_RTOL = 1e-12


class SingularMatrixError(ValueError):
    pass


def linear_index(i: int, r: int, R: int, N: Optional[int] = None) -> int:
    if not 0 <= r < R or i < 0 or (N is not None and i >= N):
        raise IndexError(f"index (i={i}, r={r}) out of range for R={R}, N={N}")
    return i * R + r


def inverse_index(l: int, R: int, N: Optional[int] = None) -> tuple[int, int]:
    if l < 0 or (N is not None and l >= N * R):
        raise IndexError(f"linear index {l} out of range")
    return divmod(l, R)


@dataclass(frozen=True)
class IndexMap:
    N: int
    R: int

    @property
    def size(self) -> int:
        return self.N * self.R

    def linear(self, i: int, r: int) -> int:
        return linear_index(i, r, self.R, self.N)

    def inverse(self, l: int) -> tuple[int, int]:
        return inverse_index(l, self.R, self.N)


@dataclass(frozen=True, eq=False)
class MatrixProblem:
    M: np.ndarray
    Y: np.ndarray
    enc: BinaryEncoding = BinaryEncoding()

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        Y = np.array(self.Y, dtype=float).reshape(-1)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"M must be square, got shape {M.shape}")
        if Y.size != M.shape[0]:
            raise ValueError(f"Y has {Y.size} entries, M is {M.shape[0]}x{M.shape[0]}")
        sv = np.linalg.svd(M, compute_uv=False)
        if sv[0] == 0 or sv[-1] / sv[0] < SINGULAR_RTOL:
            raise SingularMatrixError("matrix is singular to working precision")
        M.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "Y", Y)

    @property
    def N(self) -> int:
        return self.M.shape[0]

    @property
    def index_map(self) -> IndexMap:
        return IndexMap(self.N, self.enc.R)


def build_linear_qubo(p: MatrixProblem) -> QuboModel:
    """Unscaled QUBO of ``||M x - Y||**2``.

    With ``x_i = c chi_i - d`` and ``z = Y + d M 1`` the objective is
    ``c^2 chi'M'M chi - 2c chi'M'z + |z|^2``. Pair coefficients are
    ``c^2 2^-(r+s) (M'M)_ij`` for every pair of distinct qubits, including
    pairs inside one component; the ``(i,r) = (j,s)`` terms fold into weights.
    """
    M, Y, enc = p.M, p.Y, p.enc
    N, R, c = p.N, enc.R, enc.c
    G = M.T @ M
    z = Y + enc.d * M.sum(axis=1)
    h = M.T @ z
    pv = enc.place_values
    weights = np.empty(N * R)
    for i in range(N):
        weights[i * R : (i + 1) * R] = c * c * pv * pv * G[i, i] - 2.0 * c * pv * h[i]
    couplings = {}
    for l in range(N * R):
        i, r = divmod(l, R)
        for k in range(l + 1, N * R):
            j, s = divmod(k, R)
            b = c * c * pv[r] * pv[s] * G[i, j]
            if b != 0.0:
                couplings[(l, k)] = b
    return QuboModel(weights, couplings, constant=float(z @ z))


def reconstruct_solution(bits, index_map: IndexMap, enc: BinaryEncoding = BinaryEncoding()) -> np.ndarray:
    q = np.asarray(bits, dtype=float)
    if q.shape != (index_map.size,):
        raise ValueError(f"expected {index_map.size} bits, got shape {q.shape}")
    return enc.c * (q.reshape(index_map.N, index_map.R) @ enc.place_values) - enc.d


@dataclass(frozen=True)
class LinearSolution:
    x: np.ndarray
    bits: np.ndarray
    scaled_energy: float
    raw_energy: float
    residual_norm: float
    chain_break_fraction: float = 0.0


def solve_linear(p: MatrixProblem, solver="brute") -> LinearSolution:
    """Ground state of the scaled QUBO, decoded and scored.

    An annealing solver that returns only broken chains raises
    :class:`~qlinsolve.chimera.BrokenChainError`.
    """
    model = scale_by_max_coupling(build_linear_qubo(p))
    outcome = make_solver(solver)(model)
    x = reconstruct_solution(outcome.state, p.index_map, p.enc)
    breaks = outcome.samples.chain_break_fraction if outcome.samples is not None else 0.0
    return LinearSolution(
        x=x,
        bits=np.asarray(outcome.state, dtype=np.uint8),
        scaled_energy=float(outcome.energy),
        raw_energy=float(outcome.energy) * model.scale,
        residual_norm=float(np.linalg.norm(p.M @ x - p.Y)),
        chain_break_fraction=breaks,
    )


@dataclass
class InversionResult:
    inverse: np.ndarray
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.failures


def invert_matrix(M, enc: BinaryEncoding = BinaryEncoding(), solver="brute") -> InversionResult:
    """Solve ``M x = e_j`` for every basis vector; failed columns are NaN."""
    M = np.asarray(M, dtype=float)
    N = M.shape[0]
    inv = np.full((N, N), np.nan)
    failures = {}
    solve = make_solver(solver)
    for j in range(N):
        e = np.zeros(N)
        e[j] = 1.0
        try:
            inv[:, j] = solve_linear(MatrixProblem(M, e, enc), solve).x
        except BrokenChainError as exc:
            failures[j] = str(exc)
    return InversionResult(inv, failures)


@dataclass
class LinearTrace:
    x: np.ndarray
    residuals: list[float] = field(default_factory=list)
    offsets: list[int] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.offsets)


def iterate_linear(
    p: MatrixProblem, tol: float = 1e-6, max_iter: int = 50, solver="brute"
) -> LinearTrace:
    """Residual refinement for ``M x = Y``.

    Each round rescales the residual by ``2**-offset`` with
    ``offset = floorexp(|r|) - floorexp(sigma_min) + 1``, which bounds the
    sub-problem's solution norm by 1, solves it, and subtracts. The bound can
    be loose; when a round returns the zero vector the offset is lowered by
    one more on the next round. ``x = 0`` is always representable, so
    residual norms never increase. Every solve counts toward ``max_iter``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _, smin = singular_value_bounds(p.M)
    solve = make_solver(solver)
    x = np.zeros(p.N)
    residual = p.Y.copy()
    threshold = tol * max(1.0, float(np.linalg.norm(p.Y)))
    trace = LinearTrace(x=x, residuals=[float(np.linalg.norm(residual))])
    boost = 0
    while trace.residuals[-1] > threshold and trace.iterations < max_iter:
        offset = exponent_offset(trace.residuals[-1], smin).offset - boost
        scaled = np.ldexp(residual, -offset)
        step = solve_linear(MatrixProblem(p.M, scaled, p.enc), solve)
        x_n = np.ldexp(step.x, offset)
        if not x_n.any():
            boost += 1
        else:
            x = x + x_n
            residual = residual - p.M @ x_n
        trace.offsets.append(offset)
        trace.residuals.append(float(np.linalg.norm(residual)))
    trace.x = x
    trace.converged = trace.residuals[-1] <= threshold
    return trace


# -- conditioning --------------------------------------------------------


def _power_iteration(apply, n: int, tol: float, max_iter: int) -> float:
    v = np.ones(n) / math.sqrt(n)
    v = v + 1e-3 * np.arange(n)  # break symmetry with eigenvectors orthogonal to 1
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = apply(v)
        new = float(np.linalg.norm(w))
        if new == 0.0:
            return 0.0
        v = w / new
        if abs(new - lam) <= tol * new:
            return new
        lam = new
    return lam


def singular_value_bounds(M, tol: float = 1e-13, max_iter: int = 100_000) -> tuple[float, float]:
    """``(sigma_max, sigma_min)`` by power iteration on ``M'M`` and on its inverse."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    G = M.T @ M
    smax = math.sqrt(_power_iteration(lambda v: G @ v, n, tol, max_iter))
    try:
        lu = np.linalg.inv(G)
    except np.linalg.LinAlgError:
        return smax, 0.0
    inv_top = _power_iteration(lambda v: lu @ v, n, tol, max_iter)
    smin = 1.0 / math.sqrt(inv_top) if inv_top > 0 else 0.0
    return smax, smin


def condition_number(M, method: str = "svd") -> float:
    """Condition number of a square matrix; ``inf`` when singular.

    ``svd`` is ``sigma_max/sigma_min``. ``eigen`` is the ratio of the largest
    to the smallest eigenvalue magnitude, the measure quoted for the bundled
    ill-conditioned fixtures.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("condition number needs a square matrix")
    if method == "svd":
        if abs(np.linalg.det(M)) == 0.0:
            return math.inf
        smax, smin = singular_value_bounds(M)
        return math.inf if smin == 0.0 or smin / smax < SINGULAR_RTOL else smax / smin
    if method == "eigen":
        ev = np.abs(np.linalg.eigvals(M))
        return math.inf if ev.min() == 0.0 or ev.min() / ev.max() < SINGULAR_RTOL else float(ev.max() / ev.min())
    raise ValueError(f"unknown method {method!r}")


# -- problem files -------------------------------------------------------


def format_problem(M, Y, R: int = 4, comments: tuple[str, ...] = ()) -> str:
    M = np.asarray(M, dtype=float)
    lines = [f"# {c}" for c in comments]
    lines.append(f"{M.shape[0]} {R}")
    lines += [" ".join(repr(float(v)) for v in row) for row in M]
    lines.append(" ".join(repr(float(v)) for v in np.asarray(Y, dtype=float)))
    return "\n".join(lines) + "\n"


def parse_problem(text: str) -> tuple[np.ndarray, np.ndarray, int]:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise ValueError("first line must be 'N R'")
    N, R = int(rows[0][0]), int(rows[0][1])
    if len(rows) != N + 2:
        raise ValueError(f"expected {N} matrix rows and one Y row, got {len(rows) - 1} rows")
    M = np.array([[float(v) for v in row] for row in rows[1 : N + 1]])
    Y = np.array([float(v) for v in rows[N + 1]])
    if M.shape != (N, N) or Y.shape != (N,):
        raise ValueError("matrix or vector has the wrong width")
    return M, Y, R


def read_problem(path) -> tuple[np.ndarray, np.ndarray, int]:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def write_problem(path, M, Y, R: int = 4, comments: tuple[str, ...] = ()) -> None:
    Path(path).write_text(format_problem(M, Y, R, comments), encoding="utf-8")
