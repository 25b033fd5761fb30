"""Bundled 2x2 and 3x3 test systems.

``FIXTURES`` holds the systems used throughout the test suite. Three of them
differ from the originally published numbers by a single sign that made the
published solution inconsistent with its own ``(M, Y)``; the published
versions are kept in ``AS_PRINTED`` for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linear_system import MatrixProblem, format_problem

__all__ = ["Fixture", "FIXTURES", "AS_PRINTED", "get_fixture", "write_fixture_files"]


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    M: np.ndarray
    Y: np.ndarray
    x: np.ndarray  # solution quoted alongside the system
    note: str = ""

    def problem(self, enc=None) -> MatrixProblem:
        return MatrixProblem(self.M, self.Y) if enc is None else MatrixProblem(self.M, self.Y, enc)


def _fx(name, M, Y, x, note=""):
    return Fixture(name, np.array(M, dtype=float), np.array(Y, dtype=float), np.array(x, dtype=float), note)


_BLOCK = [[0.0, -2.0], [-2.0, -1.5]]

_TWO_BY_TWO = [
    _fx("1a", [[0.5, 1.5], [1.5, 0.5]], [1.0, 0.0], [-0.25, 0.75]),
    _fx("1b", [[0.5, 1.5], [1.5, 0.5]], [0.0, 1.0], [0.75, -0.25]),
    _fx("1c", [[2.0, -1.0], [-0.5, 0.5]], [1.0, 0.0], [1.0, 1.0]),
    _fx("1d", [[1.0, 2.0], [0.5, 0.5]], [1.0, 0.0], [-1.0, 1.0]),
    _fx("1e", [[3.0, 2.0], [2.0, 1.0]], [1.0, 1.0], [1.0, -1.0]),
    _fx("1f", [[1.0, 0.5], [1.0, -0.5]], [1.0, 1.0], [1.0, 0.0]),
    _fx("1g", _BLOCK, [1.0, 0.25], [0.25, -0.5]),
    _fx("1h", _BLOCK, [-0.5, -0.875], [0.25, 0.25]),
    _fx("1i", [[1.0, 2.0], [2.0, 3.999]], [4.0, 7.999], [2.0, 1.0], "ill-conditioned"),
    _fx("1j", [[1.80026, 1.6019], [1.6019, 4.19974]], [5.2007, 7.40013], [2.0, 1.0], "preconditioned 1i"),
]

_G_M = [[6.1795, 11.8207, 2.0583], [15.673, -7.56717, -3.8520], [-5.6457, 7.96872, 15.9418]]
_C_M = [[1.0, 0.0, 0.0], [0.0, 0.0, -2.0], [0.0, -2.0, -1.5]]

_THREE_BY_THREE = [
    _fx("2a", [[0.0, -2.0, 0.0], [-2.0, -1.5, 0.0], [0.0, 0.0, 1.0]], [1.0, 0.25, 1.0], [0.25, -0.5, 1.0],
        "M[1][1] sign corrected"),
    _fx("2b", [[0.0, -2.0, 0.0], [-2.0, -1.5, 0.0], [0.0, 0.0, 1.0]], [1.0, 0.25, 0.0], [0.25, -0.5, 0.0],
        "M[1][1] sign corrected"),
    _fx("2c", _C_M, [1.0, 0.0, 0.25], [0.25, 0.0, -0.5], "quoted solution does not solve this system"),
    _fx("2d", _C_M, [1.0, 1.0, 0.25], [1.0, 0.25, -0.5]),
    _fx("2e", _C_M, [0.0, 1.0, 0.25], [0.0, 0.25, -0.5]),
    _fx("2f", [[-4.0, 6.0, 1.0], [8.0, -11.0, -2.0], [-3.0, 4.0, 1.0]], [0.75, -1.25, 0.25], [0.0, 0.25, -0.75],
        "ill-conditioned"),
    _fx("2g", _G_M, [1.4114, 0.9972, -9.9643], [0.0, 0.25, -0.75], "preconditioned 2f; Y[2] sign corrected"),
]

FIXTURES: dict[str, Fixture] = {f.name: f for f in _TWO_BY_TWO + _THREE_BY_THREE}

AS_PRINTED: dict[str, Fixture] = {
    "2a": _fx("2a", [[0.0, -2.0, 0.0], [-2.0, 1.5, 0.0], [0.0, 0.0, 1.0]], [1.0, 0.25, 1.0], [0.25, -0.5, 1.0]),
    "2b": _fx("2b", [[0.0, -2.0, 0.0], [-2.0, 1.5, 0.0], [0.0, 0.0, 1.0]], [1.0, 0.25, 0.0], [0.25, -0.5, 0.0]),
    "2g": _fx("2g", _G_M, [1.4114, 0.9972, 9.9643], [0.0, 0.25, -0.75]),
}


def get_fixture(name: str, as_printed: bool = False) -> Fixture:
    key = name.lower().strip().replace("(", "").replace(")", "")
    table = AS_PRINTED if as_printed else FIXTURES
    if key not in table:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(table)}")
    return table[key]


def write_fixture_files(directory, R: int = 4) -> list[Path]:
    """Write every fixture as a problem file; as-printed variants go to ``as_printed/``."""
    out = Path(directory)
    (out / "as_printed").mkdir(parents=True, exist_ok=True)
    paths = []
    for sub, table in (("", FIXTURES), ("as_printed", AS_PRINTED)):
        for f in table.values():
            path = out / sub / f"{f.name}.prob"
            comments = (f"fixture {f.name}", f"expected x = {' '.join(repr(float(v)) for v in f.x)}")
            if f.note:
                comments += (f.note,)
            path.write_text(format_problem(f.M, f.Y, R, comments), encoding="utf-8")
            paths.append(path)
    return paths
