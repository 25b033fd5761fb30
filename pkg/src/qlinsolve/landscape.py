"""Energy landscape diagnostics: Gray-ordered projections and near-ground counts.

The counting window ``delta`` is a classical stand-in for the energy
resolution of a finite-time anneal; no dynamics are simulated.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .chimera import ChimeraGraph, Embedding, embed_hamiltonian, expand_state
from .qubo_core import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    QuboModel,
    brute_force_solve,
    energies,
    states_from_ints,
)

__all__ = [
    "MAX_GRAY_BITS",
    "GrayProjection",
    "DegeneracyReport",
    "EmbeddedOverlay",
    "gray_sequence",
    "gray_codes",
    "gray_projection",
    "degeneracy_report",
    "compare_embedded_landscape",
]

MAX_GRAY_BITS = 24


def gray_codes(n: int) -> np.ndarray:
    """Reflected-binary Gray code as integers, built by recursive reflection.

    The sequence for ``n`` bits is the ``n-1`` sequence followed by its
    mirror image with the new top bit set.
    """
    if not 1 <= n <= MAX_GRAY_BITS:
        raise ValueError(f"Gray code width must be in [1, {MAX_GRAY_BITS}], got {n}")
    codes = np.array([0, 1], dtype=np.int64)
    for k in range(1, n):
        codes = np.concatenate([codes, codes[::-1] | (1 << k)])
    return codes


def gray_sequence(n: int) -> np.ndarray:
    """All ``n``-bit states in reflected-binary order, shape ``(2**n, n)``, MSB first."""
    return states_from_ints(gray_codes(n), n)


@dataclass(frozen=True, eq=False)
class GrayProjection:
    gray_index: np.ndarray
    states: np.ndarray
    energies: np.ndarray

    def __len__(self) -> int:
        return int(self.gray_index.size)

    def rows(self):
        for k, s, e in zip(self.gray_index, self.states, self.energies):
            yield int(k), "".join(map(str, s.tolist())), float(e)

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["gray_index", "bits", "energy"])
            for k, bits, e in self.rows():
                w.writerow([k, bits, f"{e:.17g}"])


def _check_size(model: QuboModel, cap: int) -> None:
    if model.num_vars > cap:
        raise EnumerationCapError(f"{model.num_vars} variables exceeds the enumeration cap of {cap}")


def gray_projection(model: QuboModel, cap: int = DEFAULT_ENUMERATION_CAP) -> GrayProjection:
    _check_size(model, cap)
    n = model.num_vars
    if n == 0:
        raise ValueError("model has no variables")
    states = gray_sequence(n)
    return GrayProjection(np.arange(1 << n, dtype=np.int64), states, energies(model, states))


@dataclass(frozen=True)
class DegeneracyReport:
    ground_energy: float
    first_excited: float
    gap: float
    delta: float
    count: int  # states with energy <= E0 + delta, ground included
    spectral_range: float


def degeneracy_report(
    model: QuboModel,
    delta: Optional[float] = None,
    fraction: float = 0.05,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DegeneracyReport:
    """Near-ground statistics from the full spectrum.

    ``delta`` is an absolute window in reported-energy units; when omitted it
    is ``fraction`` of the spectral range ``E_max - E0``. ``first_excited`` is
    the lowest energy strictly above ``E0`` (``E0`` itself if the spectrum is
    flat).
    """
    _check_size(model, cap)
    spec = brute_force_solve(model, cap)
    E = spec.energies
    e0 = float(E[0])
    span = float(E[-1] - e0)
    window = fraction * span if delta is None else float(delta)
    if window < 0:
        raise ValueError("window must be non-negative")
    above = E[E > e0]
    e1 = float(above[0]) if above.size else e0
    count = int(np.count_nonzero(E <= e0 + window))
    return DegeneracyReport(e0, e1, e1 - e0, window, count, span)


@dataclass(frozen=True, eq=False)
class EmbeddedOverlay:
    """Energies of every logical state and of its intact-chain physical image.

    ``bare`` is the physical energy when chain couplings are applied with no
    compensating weight shift; its offset from ``logical`` varies by state.
    """

    states: np.ndarray
    logical: np.ndarray
    embedded: np.ndarray
    bare: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.embedded - self.logical)))

    @property
    def bare_offsets(self) -> np.ndarray:
        return self.bare - self.logical

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["gray_index", "bits", "logical", "embedded", "no_counter_weights"])
            for k, (s, a, b, c) in enumerate(zip(self.states, self.logical, self.embedded, self.bare)):
                w.writerow([k, "".join(map(str, s.tolist())), f"{a:.17g}", f"{b:.17g}", f"{c:.17g}"])


def compare_embedded_landscape(
    logical: QuboModel,
    embedding: Embedding,
    graph: ChimeraGraph,
    alpha: float,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> EmbeddedOverlay:
    """Overlay of logical and embedded energies over intact-chain states, in Gray order."""
    _check_size(logical, cap)
    states = gray_sequence(logical.num_vars)
    physical = np.array([expand_state(s, embedding) for s in states])
    with_ct = embed_hamiltonian(logical, embedding, graph, alpha)
    without = embed_hamiltonian(logical, embedding, graph, alpha, counter_weights=False)
    return EmbeddedOverlay(
        states=states,
        logical=energies(logical, states),
        embedded=energies(with_ct, physical),
        bare=energies(without, physical),
    )
