"""Classical simulated annealing as a stand-in for an annealer.

Single-bit-flip Metropolis dynamics under a geometric temperature schedule.
Every read is seeded independently from ``(seed, read index)``, so results do
not depend on how reads are scheduled.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np
from numba import njit

from .chimera import (
    DEFAULT_ALPHA,
    BrokenChainError,
    ChimeraGraph,
    Embedding,
    build_chimera,
    embed_complete_graph,
    embed_hamiltonian,
    unembed_many,
)
from .qubo_core import QuboModel, brute_force_solve, energies, state_to_int

__all__ = [
    "SamplerConfig",
    "SampleSet",
    "SolveOutcome",
    "BruteForce",
    "Annealer",
    "make_solver",
    "sample",
    "sample_embedded",
    "read_seed",
    "default_schedule",
    "chimera_for",
]

_MASK64 = (1 << 64) - 1


def read_seed(seed: int, index: int) -> int:
    """splitmix64 of ``seed XOR (index * golden gamma)``, folded to 32 bits."""
    z = (int(seed) ^ ((int(index) * 0x9E3779B97F4A7C15) & _MASK64)) & _MASK64
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return (z ^ (z >> 32)) & 0xFFFFFFFF


@dataclass(frozen=True)
class SamplerConfig:
    reads: int = 100
    sweeps: int = 1000
    t_hot: Optional[float] = None
    t_cold: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.reads < 1:
            raise ValueError("reads must be >= 1")
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.t_hot is not None and self.t_cold is not None and not self.t_hot > self.t_cold > 0:
            raise ValueError(f"need t_hot > t_cold > 0, got ({self.t_hot}, {self.t_cold})")
        if (self.t_hot is not None and self.t_hot <= 0) or (self.t_cold is not None and self.t_cold <= 0):
            raise ValueError("temperatures must be positive")


def default_schedule(model: QuboModel, config: SamplerConfig) -> tuple[float, float]:
    """``(T_hot, T_cold)`` in reported-energy units.

    Defaults to 10x the largest and 1% of the smallest nonzero coefficient
    magnitude, so scaled and unscaled models anneal identically.
    """
    coeffs = np.abs(np.concatenate([model.weights, np.fromiter(model.couplings.values(), float)]))
    coeffs = coeffs / model.scale
    coeffs = coeffs[coeffs >= np.finfo(float).tiny]  # subnormals count as zero
    hot = config.t_hot if config.t_hot is not None else (10.0 * coeffs.max() if coeffs.size else 1.0)
    cold = config.t_cold if config.t_cold is not None else (0.01 * coeffs.min() if coeffs.size else 0.01)
    if not hot > cold > 0:
        raise ValueError(f"invalid schedule: T_hot={hot}, T_cold={cold}")
    return float(hot), float(cold)


@njit(cache=True)
def _anneal_reads(indptr, indices, data, weights, betas, seeds):
    n = weights.size
    out = np.empty((seeds.size, n), dtype=np.uint8)
    field = np.empty(n)
    for r in range(seeds.size):
        np.random.seed(seeds[r])
        state = np.empty(n, dtype=np.uint8)
        for i in range(n):
            state[i] = 1 if np.random.random() < 0.5 else 0
        for i in range(n):
            field[i] = weights[i]
        for i in range(n):
            if state[i] == 1:
                for p in range(indptr[i], indptr[i + 1]):
                    field[indices[p]] += 2.0 * data[p]
        for s in range(betas.size):
            beta = betas[s]
            for i in range(n):
                delta = field[i] if state[i] == 0 else -field[i]
                if delta <= 0.0 or np.random.random() < math.exp(-beta * delta):
                    sign = 1.0 if state[i] == 0 else -1.0
                    state[i] = 1 - state[i]
                    for p in range(indptr[i], indptr[i + 1]):
                        field[indices[p]] += 2.0 * sign * data[p]
        out[r] = state
    return out


def _csr(model: QuboModel):
    n = model.num_vars
    nbrs = [[] for _ in range(n)]
    for (i, j), b in model.couplings.items():
        b = b / model.scale
        nbrs[i].append((j, b))
        nbrs[j].append((i, b))
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + len(nbrs[i])
    indices = np.array([j for row in nbrs for j, _ in row], dtype=np.int64)
    data = np.array([b for row in nbrs for _, b in row], dtype=np.float64)
    return indptr, indices, data


def _raw_reads(model: QuboModel, config: SamplerConfig) -> np.ndarray:
    hot, cold = default_schedule(model, config)
    if config.sweeps == 1:
        temps = np.array([cold])
    else:
        temps = hot * (cold / hot) ** (np.arange(config.sweeps) / (config.sweeps - 1))
    seeds = np.array([read_seed(config.seed, k) for k in range(config.reads)], dtype=np.int64)
    indptr, indices, data = _csr(model)
    with np.errstate(over="ignore", divide="ignore"):
        betas = 1.0 / temps  # an infinite beta is a greedy sweep
    return _anneal_reads(indptr, indices, data, model.weights / model.scale, betas, seeds)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Distinct outcomes sorted by energy then by state label.

    ``broken`` marks rows that came from reads with at least one broken chain;
    their state is the majority-vote logical state.
    """

    states: np.ndarray
    energies: np.ndarray
    counts: np.ndarray
    broken: np.ndarray
    reads: int

    @classmethod
    def from_reads(cls, states, energies_, broken=None) -> "SampleSet":
        S = np.asarray(states, dtype=np.uint8)
        E = np.asarray(energies_, dtype=float)
        B = np.zeros(len(S), dtype=bool) if broken is None else np.asarray(broken, dtype=bool)
        groups: dict[tuple, list] = {}
        for s, e, b in zip(S, E, B):
            key = (s.tobytes(), bool(b))
            if key in groups:
                groups[key][2] += 1
            else:
                groups[key] = [s, e, 1, bool(b)]
        rows = sorted(groups.values(), key=lambda g: (g[1], state_to_int(g[0]), g[3]))
        width = S.shape[1] if S.ndim == 2 else 0
        return cls(
            states=np.array([g[0] for g in rows], dtype=np.uint8).reshape(len(rows), width),
            energies=np.array([g[1] for g in rows], dtype=float),
            counts=np.array([g[2] for g in rows], dtype=np.int64),
            broken=np.array([g[3] for g in rows], dtype=bool),
            reads=int(len(S)),
        )

    def __len__(self) -> int:
        return int(self.counts.size)

    @property
    def chain_break_fraction(self) -> float:
        return float(self.counts[self.broken].sum()) / self.reads

    @property
    def all_broken(self) -> bool:
        return bool(self.broken.all())

    def best(self, intact_only: bool = True) -> tuple[np.ndarray, float]:
        mask = ~self.broken if intact_only else np.ones(len(self), dtype=bool)
        if not mask.any():
            raise BrokenChainError([], "broken chains: no read with intact chains")
        k = int(np.flatnonzero(mask)[0])
        return self.states[k].copy(), float(self.energies[k])

    def count_of(self, state, intact_only: bool = True) -> int:
        target = np.asarray(state, dtype=np.uint8)
        hit = np.all(self.states == target, axis=1)
        if intact_only:
            hit &= ~self.broken
        return int(self.counts[hit].sum())

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["bits", "energy", "count", "broken"])
            for s, e, c, b in zip(self.states, self.energies, self.counts, self.broken):
                w.writerow(["".join(map(str, s.tolist())), f"{e:.17g}", int(c), int(b)])


def sample(model: QuboModel, config: SamplerConfig = SamplerConfig()) -> SampleSet:
    reads = _raw_reads(model, config)
    return SampleSet.from_reads(reads, energies(model, reads))


def chimera_for(n: int) -> ChimeraGraph:
    """Smallest square Chimera graph that holds the K_n embedding."""
    t = max(1, math.ceil(n / 4))
    return build_chimera(t, t)


def sample_embedded(
    logical: QuboModel,
    graph: Optional[ChimeraGraph] = None,
    alpha: float = DEFAULT_ALPHA,
    config: SamplerConfig = SamplerConfig(),
    policy: str = "discard",
    embedding: Optional[Embedding] = None,
) -> SampleSet:
    """Embed, anneal the physical model, and map reads back to logical states.

    Under the ``discard`` policy a run in which every read has a broken chain
    raises :class:`BrokenChainError` with the sample set attached as
    ``.samples``.
    """
    graph = graph if graph is not None else chimera_for(logical.num_vars)
    embedding = embedding if embedding is not None else embed_complete_graph(logical.num_vars, graph)
    physical = embed_hamiltonian(logical, embedding, graph, alpha)
    reads = _raw_reads(physical, config)
    states, broken = unembed_many(reads, embedding, policy)
    result = SampleSet.from_reads(states, energies(logical, states), broken)
    if policy == "discard" and result.all_broken:
        err = BrokenChainError([], "broken chains: every read had a broken chain")
        err.samples = result
        raise err
    return result


# -- solver front ends ---------------------------------------------------


@dataclass
class SolveOutcome:
    state: np.ndarray
    energy: float
    samples: Optional[SampleSet] = None


class BruteForce:
    name = "brute"

    def __call__(self, model: QuboModel) -> SolveOutcome:
        spec = brute_force_solve(model)
        return SolveOutcome(spec.ground_state, spec.ground_energy)


@dataclass
class Annealer:
    """Best-of-reads annealing solver, optionally through a Chimera embedding."""

    config: SamplerConfig = SamplerConfig()
    embed: bool = True
    alpha: float = DEFAULT_ALPHA
    policy: str = "discard"
    name: str = "sa"

    def __call__(self, model: QuboModel) -> SolveOutcome:
        if self.embed:
            samples = sample_embedded(model, alpha=self.alpha, config=self.config, policy=self.policy)
        else:
            samples = sample(model, self.config)
        state, e = samples.best(intact_only=self.policy == "discard")
        return SolveOutcome(state, e, samples)


Solver = Callable[[QuboModel], SolveOutcome]


def make_solver(solver: Union[str, Solver, None] = "brute", **kwargs) -> Solver:
    if solver is None or solver == "brute":
        return BruteForce()
    if solver == "sa":
        return Annealer(**kwargs)
    if callable(solver):
        return solver
    raise ValueError(f"unknown solver {solver!r}; expected 'brute' or 'sa'")
