"""QUBO models, energy evaluation, Ising conversion and exact solvers.

Coefficients follow the double-count convention: the objective is

    E(Q) = sum_r A_r Q_r + sum_{r != s} B_rs Q_r Q_s

so every unordered pair contributes ``2 * B_rs`` when both bits are set.
Only one value per unordered pair is stored. The reported energy is the raw
objective divided by ``scale`` and never includes ``constant``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "QuboModel",
    "IsingModel",
    "Spectrum",
    "ScalingWarning",
    "EnumerationCapError",
    "energy",
    "energies",
    "to_ising",
    "ising_energy",
    "bits_to_spins",
    "scale_by_max_coupling",
    "brute_force_solve",
    "exact_ground_state",
    "states_from_ints",
    "state_to_int",
    "dumps_qubo",
    "loads_qubo",
    "write_qubo",
    "read_qubo",
]

DEFAULT_ENUMERATION_CAP = 24
_CHUNK = 1 << 16


class ScalingWarning(UserWarning):
    """Raised when a model has no couplings to normalise by."""


class EnumerationCapError(ValueError):
    pass


def _canonical_couplings(couplings: Mapping[tuple[int, int], float], n: int) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for (i, j), value in couplings.items():
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-coupling ({i}, {i}) is not allowed; fold it into the weight")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"coupling ({i}, {j}) out of range for {n} variables")
        key = (i, j) if i < j else (j, i)
        if key in out and out[key] != float(value):
            raise ValueError(f"conflicting values for coupling {key}")
        out[key] = float(value)
    return out


@dataclass(frozen=True, eq=False)
class QuboModel:
    """Quadratic objective over ``num_vars`` binary variables.

    ``couplings`` maps an unordered pair to its ordered-pair coefficient
    ``B_rs``. ``scale`` is the positive divisor applied to reported energies.
    """

    weights: np.ndarray
    couplings: Mapping[tuple[int, int], float] = field(default_factory=dict)
    constant: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size == 0:
            raise ValueError("a QUBO model needs at least one variable")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "couplings", _canonical_couplings(self.couplings, w.size))
        object.__setattr__(self, "constant", float(self.constant))
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        object.__setattr__(self, "scale", float(self.scale))

    @classmethod
    def from_matrix(cls, weights, matrix, constant: float = 0.0, scale: float = 1.0) -> "QuboModel":
        """Build from a symmetric coupling matrix whose diagonal is ignored."""
        B = np.asarray(matrix, dtype=float)
        n = B.shape[0]
        if B.shape != (n, n):
            raise ValueError("coupling matrix must be square")
        if not np.allclose(B, B.T, rtol=0, atol=0):
            raise ValueError("coupling matrix must be symmetric")
        iu, ju = np.triu_indices(n, k=1)
        couplings = {(int(i), int(j)): float(B[i, j]) for i, j in zip(iu, ju) if B[i, j] != 0.0}
        return cls(weights, couplings, constant, scale)

    @property
    def num_vars(self) -> int:
        return int(self.weights.size)

    def coupling(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        key = (i, j) if i < j else (j, i)
        return self.couplings.get(key, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        """Dense symmetric coupling matrix with zero diagonal (raw units)."""
        cached = self.__dict__.get("_matrix")
        if cached is None:
            n = self.num_vars
            cached = np.zeros((n, n))
            for (i, j), b in self.couplings.items():
                cached[i, j] = cached[j, i] = b
            cached.setflags(write=False)
            object.__setattr__(self, "_matrix", cached)
        return cached

    def max_abs_coefficient(self) -> float:
        vals = [abs(v) for v in self.couplings.values()] + list(np.abs(self.weights))
        return float(max(vals)) if vals else 0.0

    def with_scale(self, scale: float) -> "QuboModel":
        return QuboModel(self.weights, self.couplings, self.constant, scale)

    def raw_energy(self, state) -> float:
        """Objective value without the scale division or the constant."""
        q = _as_state(state, self.num_vars).astype(float)
        return float(self.weights @ q + q @ self.matrix @ q)

    def __repr__(self) -> str:
        return (
            f"QuboModel(num_vars={self.num_vars}, couplings={len(self.couplings)}, "
            f"constant={self.constant!r}, scale={self.scale!r})"
        )


def _as_state(state, n: int) -> np.ndarray:
    q = np.asarray(state)
    if q.ndim != 1 or q.size != n:
        raise ValueError(f"state has length {q.size}, model has {n} variables")
    if not np.all((q == 0) | (q == 1)):
        raise ValueError("state entries must be 0 or 1")
    return q.astype(np.uint8)


def energy(model: QuboModel, state) -> float:
    """Reported energy of ``state``: raw objective divided by ``model.scale``."""
    return model.raw_energy(state) / model.scale


def energies(model: QuboModel, states) -> np.ndarray:
    """Vectorised :func:`energy` over the rows of ``states``."""
    S = np.asarray(states, dtype=float)
    if S.ndim != 2 or S.shape[1] != model.num_vars:
        raise ValueError(f"states must have shape (k, {model.num_vars})")
    raw = S @ model.weights + np.einsum("ki,ki->k", S @ model.matrix, S)
    return raw / model.scale


def states_from_ints(values, n: int) -> np.ndarray:
    """Bit rows for integer labels; bit 0 is the most significant."""
    v = np.asarray(values, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((v[:, None] >> shifts) & 1).astype(np.uint8)


def state_to_int(state) -> int:
    out = 0
    for b in np.asarray(state).tolist():
        out = (out << 1) | int(b)
    return out


# -- Ising ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Spin form with spins in {-1/2, +1/2}; same double-count convention."""

    fields: np.ndarray
    couplings: Mapping[tuple[int, int], float]
    constant: float = 0.0
    scale: float = 1.0

    @property
    def num_vars(self) -> int:
        return int(np.asarray(self.fields).size)


def bits_to_spins(state) -> np.ndarray:
    return np.asarray(state, dtype=float) - 0.5


def to_ising(model: QuboModel) -> IsingModel:
    """Substitute ``Q = J + 1/2``; the Ising energy (with its constant) equals
    the QUBO energy for corresponding states."""
    B = model.matrix
    fields = model.weights + B.sum(axis=1)
    constant = 0.5 * float(model.weights.sum()) + 0.25 * float(B.sum())
    return IsingModel(fields=fields.copy(), couplings=dict(model.couplings), constant=constant, scale=model.scale)


def ising_energy(ising: IsingModel, spins) -> float:
    J = np.asarray(spins, dtype=float)
    if J.shape != (ising.num_vars,):
        raise ValueError("spin vector length mismatch")
    if not np.all(np.abs(np.abs(J) - 0.5) < 1e-15):
        raise ValueError("spins must be +-1/2")
    total = float(np.asarray(ising.fields) @ J) + ising.constant
    for (i, j), b in ising.couplings.items():
        total += 2.0 * b * J[i] * J[j]
    return total / ising.scale


# -- scaling -------------------------------------------------------------


def scale_by_max_coupling(model: QuboModel) -> QuboModel:
    """Normalise reported energies by the largest |pair coefficient|.

    A model without couplings comes back unscaled with a :class:`ScalingWarning`.
    """
    lam = max((abs(v) for v in model.couplings.values()), default=0.0)
    if lam == 0.0:
        warnings.warn("model has no nonzero couplings; left unscaled", ScalingWarning, stacklevel=2)
        return model.with_scale(1.0)
    return model.with_scale(lam)


# -- exhaustive solvers --------------------------------------------------


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All ``2**n`` states sorted by reported energy, ties by integer label."""

    num_vars: int
    labels: np.ndarray
    energies: np.ndarray

    def __len__(self) -> int:
        return int(self.labels.size)

    @property
    def states(self) -> np.ndarray:
        return states_from_ints(self.labels, self.num_vars)

    def state(self, k: int) -> np.ndarray:
        return states_from_ints(self.labels[k : k + 1], self.num_vars)[0]

    @property
    def ground_state(self) -> np.ndarray:
        return self.state(0)

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def first_excited(self) -> float:
        """Energy of the second entry (equals E0 when the ground is degenerate)."""
        return float(self.energies[1]) if len(self) > 1 else float(self.energies[0])

    def ground_multiplicity(self, atol: float = 0.0) -> int:
        return int(np.count_nonzero(self.energies <= self.energies[0] + atol))


def _enumerate_energies(model: QuboModel) -> np.ndarray:
    n = model.num_vars
    total = 1 << n
    out = np.empty(total)
    for start in range(0, total, _CHUNK):
        labels = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        out[start : start + labels.size] = energies(model, states_from_ints(labels, n))
    return out


def brute_force_solve(model: QuboModel, cap: int = DEFAULT_ENUMERATION_CAP) -> Spectrum:
    """Exact spectrum by enumerating every state."""
    n = model.num_vars
    if n > cap:
        raise EnumerationCapError(
            f"{n} variables exceeds the enumeration cap of {cap}; use the annealing sampler "
            "or exact_ground_state for larger sparse models"
        )
    E = _enumerate_energies(model)
    labels = np.arange(E.size, dtype=np.int64)
    order = np.lexsort((labels, E))
    return Spectrum(num_vars=n, labels=labels[order], energies=E[order])


def _greedy_vertex_cover(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    adj = [set() for _ in range(n)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    cover: list[int] = []
    while True:
        v = max(range(n), key=lambda k: (len(adj[k]), -k))
        if not adj[v]:
            return sorted(cover)
        cover.append(v)
        for u in adj[v]:
            adj[u].discard(v)
        adj[v].clear()


def exact_ground_state(model: QuboModel, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[np.ndarray, float]:
    """Exact minimiser via enumeration of a vertex cover.

    Variables outside the cover share no couplings, so each one is set
    optimally given the cover (1 iff its local field is negative). Exhaustive
    over ``2**|cover|`` assignments, which makes sparse physical models with
    a few dozen qubits tractable. Ties prefer 0 for free variables and the
    lowest cover label.
    """
    n = model.num_vars
    cover = _greedy_vertex_cover(n, model.couplings.keys())
    if len(cover) > cap:
        raise EnumerationCapError(f"vertex cover of size {len(cover)} exceeds cap {cap}")
    free = [v for v in range(n) if v not in set(cover)]
    B = model.matrix
    w = model.weights
    best_raw = np.inf
    best_state = None
    m = len(cover)
    total = 1 << m
    for start in range(0, total, _CHUNK):
        labels = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        C = states_from_ints(labels, m).astype(float)
        raw = C @ w[cover] + np.einsum("ki,ki->k", C @ B[np.ix_(cover, cover)], C)
        if free:
            field = w[free] + 2.0 * C @ B[np.ix_(cover, free)]
            raw = raw + np.minimum(field, 0.0).sum(axis=1)
        k = int(np.argmin(raw))
        if raw[k] < best_raw:
            best_raw = float(raw[k])
            state = np.zeros(n, dtype=np.uint8)
            state[cover] = C[k].astype(np.uint8)
            if free:
                state[free] = (field[k] < 0.0).astype(np.uint8)
            best_state = state
    return best_state, best_raw / model.scale


# -- text format ---------------------------------------------------------


def dumps_qubo(model: QuboModel) -> str:
    """Serialise as ``n`` then ``w i v`` / ``c i j v`` lines.

    ``k`` and ``s`` lines carry the constant and scale when they differ from
    their defaults. ``repr`` of a float round-trips exactly.
    """
    lines = [str(model.num_vars)]
    for i, v in enumerate(model.weights.tolist()):
        lines.append(f"w {i} {v!r}")
    for (i, j), v in sorted(model.couplings.items()):
        lines.append(f"c {i} {j} {v!r}")
    if model.constant != 0.0:
        lines.append(f"k {model.constant!r}")
    if model.scale != 1.0:
        lines.append(f"s {model.scale!r}")
    return "\n".join(lines) + "\n"


def loads_qubo(text: str) -> QuboModel:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 1:
        raise ValueError("first line must hold the variable count")
    n = int(rows[0][0])
    weights = np.zeros(n)
    couplings: dict[tuple[int, int], float] = {}
    constant, scale = 0.0, 1.0
    for row in rows[1:]:
        tag = row[0]
        if tag == "w" and len(row) == 3:
            i = int(row[1])
            if not 0 <= i < n:
                raise ValueError(f"weight index {i} out of range for {n} variables")
            weights[i] = float(row[2])
        elif tag == "c" and len(row) == 4:
            couplings[(int(row[1]), int(row[2]))] = float(row[3])
        elif tag == "k" and len(row) == 2:
            constant = float(row[1])
        elif tag == "s" and len(row) == 2:
            scale = float(row[1])
        else:
            raise ValueError(f"malformed QUBO line: {' '.join(row)}")
    return QuboModel(weights, couplings, constant, scale)


def write_qubo(model: QuboModel, path) -> None:
    Path(path).write_text(dumps_qubo(model), encoding="utf-8")


def read_qubo(path) -> QuboModel:
    return loads_qubo(Path(path).read_text(encoding="utf-8"))
