"""Chimera topology, complete-graph chain embeddings and Hamiltonian embedding.

Physical qubit ids: cell ``(row, col)`` owns ids ``8*(row*cols + col) + k``
for ``k`` in 0..7. Local ids 0-3 form the vertical shore and 4-7 the
horizontal shore. Every vertical qubit couples to every horizontal qubit of
its cell; vertical qubit ``k`` also couples to vertical ``k`` in the cell
below, and horizontal ``k`` to horizontal ``k`` in the cell to the right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .qubo_core import QuboModel

__all__ = [
    "ChimeraGraph",
    "Embedding",
    "EmbeddingReport",
    "BrokenChainError",
    "EmbeddingError",
    "build_chimera",
    "embed_complete_graph",
    "verify_embedding",
    "embed_hamiltonian",
    "counter_term_energy",
    "intact_ground_chain_strength",
    "detect_broken_chains",
    "unembed",
    "unembed_many",
    "expand_state",
    "DEFAULT_ALPHA",
]

DEFAULT_ALPHA = 20.0
SHORE = 4


class EmbeddingError(ValueError):
    pass


class BrokenChainError(RuntimeError):
    """A physical state could not be mapped back because a chain disagrees."""

    def __init__(self, vertices, message: str = "broken chains"):
        vertices = list(vertices)
        super().__init__(f"{message}: logical vertices {vertices}" if vertices else message)
        self.vertices = list(vertices)


@dataclass(frozen=True, eq=False)
class ChimeraGraph:
    rows: int
    cols: int
    edges: frozenset = field(repr=False)

    @property
    def num_qubits(self) -> int:
        return 8 * self.rows * self.cols

    @property
    def qubits(self) -> range:
        return range(self.num_qubits)

    def qubit(self, row: int, col: int, shore: int, k: int) -> int:
        return 8 * (row * self.cols + col) + SHORE * shore + k

    def coordinates(self, q: int) -> tuple[int, int, int, int]:
        cell, local = divmod(q, 8)
        row, col = divmod(cell, self.cols)
        shore, k = divmod(local, SHORE)
        return row, col, shore, k

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, q: int) -> set[int]:
        adj = self.__dict__.get("_adj")
        if adj is None:
            adj = {v: set() for v in self.qubits}
            for a, b in self.edges:
                adj[a].add(b)
                adj[b].add(a)
            object.__setattr__(self, "_adj", adj)
        return adj[q]


def build_chimera(rows: int, cols: int) -> ChimeraGraph:
    if rows < 1 or cols < 1:
        raise ValueError("a Chimera graph needs at least one cell")
    g = ChimeraGraph(rows, cols, frozenset())
    edges = set()
    for r in range(rows):
        for c in range(cols):
            for i in range(SHORE):
                for j in range(SHORE):
                    edges.add((g.qubit(r, c, 0, i), g.qubit(r, c, 1, j)))
                if r + 1 < rows:
                    edges.add((g.qubit(r, c, 0, i), g.qubit(r + 1, c, 0, i)))
                if c + 1 < cols:
                    edges.add((g.qubit(r, c, 1, i), g.qubit(r, c + 1, 1, i)))
    return ChimeraGraph(rows, cols, frozenset((min(a, b), max(a, b)) for a, b in edges))


@dataclass(frozen=True, eq=False)
class Embedding:
    """Logical vertex -> ordered path of physical qubits.

    Physical state vectors handled by this module are indexed by
    :attr:`qubits`, the sorted tuple of every qubit used by some chain.
    """

    chains: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        chains = {int(v): tuple(int(q) for q in chain) for v, chain in self.chains.items()}
        for v, chain in chains.items():
            if not chain:
                raise EmbeddingError(f"chain for logical vertex {v} is empty")
        object.__setattr__(self, "chains", dict(sorted(chains.items())))

    @property
    def num_logical(self) -> int:
        return len(self.chains)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(sorted({q for chain in self.chains.values() for q in chain}))

    @property
    def index(self) -> dict[int, int]:
        return {q: k for k, q in enumerate(self.qubits)}

    @property
    def max_chain_length(self) -> int:
        return max(len(c) for c in self.chains.values())

    def chain_indices(self) -> dict[int, list[int]]:
        idx = self.index
        return {v: [idx[q] for q in chain] for v, chain in self.chains.items()}

    def to_text(self) -> str:
        return "".join(f"L{v}: {' '.join(map(str, chain))}\n" for v, chain in self.chains.items())

    @classmethod
    def from_text(cls, text: str) -> "Embedding":
        chains = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, tail = line.partition(":")
            if not head.startswith("L") or not _:
                raise ValueError(f"malformed embedding line: {line!r}")
            chains[int(head[1:])] = tuple(int(t) for t in tail.split())
        return cls(chains)

    def write(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def read(cls, path) -> "Embedding":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


# Single-cell K4 layout: two singletons plus the 1-6 and 3-8 chains (1-based
# cell labels), which leaves local qubits 3 and 6 unused.
_CELL_K4 = ((4,), (1,), (0, 5), (2, 7))


def embed_complete_graph(n: int, graph: ChimeraGraph) -> Embedding:
    """Chain embedding of K_n.

    ``n <= 4`` uses one cell. Larger ``n`` uses a ``t x t`` block with
    ``t = ceil(n/4)``: vertex ``4*b + j`` runs down vertical qubit ``j`` of
    column ``b`` from row 0 to row ``b`` then right along horizontal qubit
    ``j`` of row ``b`` to column ``t-1``. Every chain has ``t + 1`` qubits.
    """
    if n < 1:
        raise ValueError("need at least one logical vertex")
    if n <= 4:
        return Embedding({v: tuple(graph.qubit(0, 0, 0, 0) + k for k in _CELL_K4[v]) for v in range(n)})
    t = math.ceil(n / SHORE)
    if graph.rows < t or graph.cols < t:
        raise EmbeddingError(f"K_{n} needs a {t}x{t} block of cells; graph is {graph.rows}x{graph.cols}")
    chains = {}
    for v in range(n):
        b, j = divmod(v, SHORE)
        chain = [graph.qubit(r, b, 0, j) for r in range(b + 1)]
        chain += [graph.qubit(b, c, 1, j) for c in range(b, t)]
        chains[v] = tuple(chain)
    return Embedding(chains)


@dataclass
class EmbeddingReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def _logical_edges(logical) -> list[tuple[int, int]]:
    if isinstance(logical, QuboModel):
        return sorted(k for k, v in logical.couplings.items() if v != 0.0)
    if isinstance(logical, int):
        return list(combinations(range(logical), 2))
    return sorted((min(a, b), max(a, b)) for a, b in logical)


def verify_embedding(embedding: Embedding, logical, graph: ChimeraGraph) -> EmbeddingReport:
    """Check qubit validity, disjointness, path connectivity and edge coverage.

    ``logical`` is a :class:`QuboModel`, a vertex count (complete graph) or
    an iterable of logical edges.
    """
    violations = []
    owner: dict[int, int] = {}
    for v, chain in embedding.chains.items():
        for q in chain:
            if not 0 <= q < graph.num_qubits:
                violations.append(f"chain {v}: qubit {q} is not in the graph")
            elif q in owner and owner[q] != v:
                violations.append(f"disjointness: qubit {q} is shared by chains {owner[q]} and {v}")
            else:
                owner[q] = v
        if len(set(chain)) != len(chain):
            violations.append(f"chain {v}: repeats a qubit")
        for a, b in zip(chain, chain[1:]):
            if not graph.has_edge(a, b):
                violations.append(f"connectivity: chain {v} has no coupler between {a} and {b}")
    for u, v in _logical_edges(logical):
        if u not in embedding.chains or v not in embedding.chains:
            violations.append(f"coverage: logical edge ({u}, {v}) has an unembedded endpoint")
            continue
        if not any(graph.has_edge(a, b) for a in embedding.chains[u] for b in embedding.chains[v]):
            violations.append(f"coverage: no physical coupler for logical edge ({u}, {v})")
    return EmbeddingReport(violations)


def _first_edge(chain_u: Sequence[int], chain_v: Sequence[int], graph: ChimeraGraph):
    found = sorted((min(a, b), max(a, b)) for a in chain_u for b in chain_v if graph.has_edge(a, b))
    return found[0] if found else None


def embed_hamiltonian(
    logical: QuboModel,
    embedding: Embedding,
    graph: ChimeraGraph,
    alpha: float = DEFAULT_ALPHA,
    counter_weights: bool = True,
) -> QuboModel:
    """Physical model over ``embedding.qubits``.

    Each qubit of a chain of length N gets ``A/N + 2(N-1)alpha/N`` and
    consecutive chain qubits are coupled at ``-alpha`` (ordered-pair value),
    so an aligned chain contributes exactly its logical weight. With
    ``counter_weights=False`` the ``2(N-1)alpha/N`` shift is omitted. Each
    logical coupling goes whole onto the lexicographically first physical
    edge between the two chains.
    """
    if alpha < 0:
        raise ValueError("chain strength alpha must be non-negative")
    if embedding.num_logical != logical.num_vars or set(embedding.chains) != set(range(logical.num_vars)):
        raise EmbeddingError("embedding must map exactly the logical variables 0..n-1")
    idx = embedding.index
    weights = np.zeros(len(idx))
    couplings: dict[tuple[int, int], float] = {}
    for v, chain in embedding.chains.items():
        n = len(chain)
        shift = 2.0 * (n - 1) * alpha / n if counter_weights else 0.0
        for q in chain:
            weights[idx[q]] = logical.weights[v] / n + shift
        for a, b in zip(chain, chain[1:]):
            if not graph.has_edge(a, b):
                raise EmbeddingError(f"chain {v} is not a path in the graph ({a}-{b})")
            couplings[(idx[a], idx[b])] = -alpha
    for (u, v), value in logical.couplings.items():
        edge = _first_edge(embedding.chains[u], embedding.chains[v], graph)
        if edge is None:
            raise EmbeddingError(f"no physical coupler available for logical coupling ({u}, {v})")
        couplings[(idx[edge[0]], idx[edge[1]])] = value
    return QuboModel(weights, couplings, logical.constant, logical.scale)


def intact_ground_chain_strength(logical: QuboModel, embedding: Embedding, margin: float = 1.01) -> float:
    """Chain strength above which every physical ground state has intact chains.

    A broken path chain of length ``N`` pays at least ``2 alpha / N`` in
    counter-term energy, while re-aligning it changes the rest of the energy
    by at most ``|A_v| + 2 sum_u |B_uv|``. The result is the largest such
    threshold over all chains, times ``margin``, and never below the largest
    coefficient magnitude. Raw (unscaled) units.
    """
    if margin <= 1.0:
        raise ValueError("margin must exceed 1")
    reach = np.abs(np.asarray(logical.weights, dtype=float)).copy()
    for (u, v), b in logical.couplings.items():
        reach[u] += 2.0 * abs(b)
        reach[v] += 2.0 * abs(b)
    bound = max(len(embedding.chains[v]) * reach[v] / 2.0 for v in embedding.chains)
    return max(logical.max_abs_coefficient(), margin * bound)


def counter_term_energy(chain_state, alpha: float) -> float:
    """Counter-term energy of one linear chain in the given configuration."""
    q = np.asarray(chain_state, dtype=float)
    n = q.size
    a = 2.0 * (n - 1) * alpha / n
    return float(a * q.sum() - 2.0 * alpha * np.sum(q[:-1] * q[1:]))


def _state_array(state, embedding: Embedding) -> np.ndarray:
    if isinstance(state, Mapping):
        return np.array([state[q] for q in embedding.qubits], dtype=np.uint8)
    s = np.asarray(state, dtype=np.uint8)
    if s.shape != (len(embedding.qubits),):
        raise ValueError(f"physical state must have length {len(embedding.qubits)}")
    return s


def detect_broken_chains(state, embedding: Embedding) -> list[int]:
    s = _state_array(state, embedding)
    return [v for v, ix in embedding.chain_indices().items() if s[ix].min() != s[ix].max()]


def unembed_many(states, embedding: Embedding, policy: str = "discard") -> tuple[np.ndarray, np.ndarray]:
    """Logical states by majority vote (ties to 0) plus a per-row broken flag.

    Under ``discard`` the logical rows of broken samples are still returned;
    callers must honour the flag.
    """
    if policy not in ("discard", "majority"):
        raise ValueError(f"unknown unembedding policy {policy!r}")
    S = np.asarray(states, dtype=np.uint8)
    if S.ndim == 1:
        S = S[None, :]
    chains = embedding.chain_indices()
    logical = np.zeros((S.shape[0], len(chains)), dtype=np.uint8)
    broken = np.zeros(S.shape[0], dtype=bool)
    for v, ix in chains.items():
        block = S[:, ix]
        ones = block.sum(axis=1)
        logical[:, v] = (2 * ones > len(ix)).astype(np.uint8)
        broken |= (ones != 0) & (ones != len(ix))
    return logical, broken


def unembed(state, embedding: Embedding, policy: str = "discard") -> np.ndarray:
    """Logical state for one physical state; raises :class:`BrokenChainError`
    under the ``discard`` policy when any chain disagrees."""
    s = _state_array(state, embedding)
    logical, broken = unembed_many(s, embedding, policy)
    if broken[0] and policy == "discard":
        raise BrokenChainError(detect_broken_chains(s, embedding))
    return logical[0]


def expand_state(logical_state, embedding: Embedding) -> np.ndarray:
    """Physical state with every chain set to its logical value."""
    q = np.asarray(logical_state, dtype=np.uint8)
    out = np.zeros(len(embedding.qubits), dtype=np.uint8)
    for v, ix in embedding.chain_indices().items():
        out[ix] = q[v]
    return out
