"""Published benchmark values for the division and linear-system solvers.

Rows are plain tuples so tests and scripts can parametrize over them.
Energies are scaled by the largest coupling magnitude unless noted.
"""
from __future__ import annotations

# (y, m, bits, energy); a row quoted for +-m is expanded to both signs
_EXACT = [
    (1.00, 1.0, (1, 0, 0, 0), -2.0),
    (0.50, 0.5, (1, 0, 0, 0), -2.0),
    (1.00, -1.0, (0, 0, 0, 0), 0.0),
    (-1.00, 1.0, (0, 0, 0, 0), 0.0),
    (0.50, -0.5, (0, 0, 0, 0), 0.0),
    (-0.50, 0.5, (0, 0, 0, 0), 0.0),
    (0.75, 1.0, (0, 1, 1, 1), -1.53125),
    (-0.75, 1.0, (0, 0, 0, 1), -0.03125),
    (0.75, -1.0, (0, 0, 0, 1), -0.03125),
    (0.50, 1.0, (0, 1, 1, 0), -1.125),
    (-0.50, 1.0, (0, 0, 1, 0), -0.125),
    (0.50, -1.0, (0, 0, 1, 0), -0.125),
    (0.25, 1.0, (0, 1, 0, 1), -0.78125),
    (-0.25, 1.0, (0, 0, 1, 1), -0.28125),
    (0.25, -1.0, (0, 0, 1, 1), -0.28125),
    (0.25, 0.5, (0, 1, 1, 0), -1.125),
    (-0.25, 0.5, (0, 0, 1, 0), -0.125),
    (0.25, -0.5, (0, 0, 1, 0), -0.125),
    (0.0, 1.00, (0, 1, 0, 0), -0.5),
    (0.0, 0.75, (0, 1, 0, 0), -0.5),
    (0.0, 0.50, (0, 1, 0, 0), -0.5),
    (0.0, 0.25, (0, 1, 0, 0), -0.5),
]

EXACT_DIVISION = _EXACT
EXACT_DIVISION_BOTH_SIGNS = _EXACT + [(y, -m, b, e) for (y, m, b, e) in _EXACT if y == 0.0]

# (y, m, decoded x, quoted energy, oracle energy); oracle differs on two rows
ROUNDED_DIVISION = [
    (0.90, 1.0, 1.00, -1.8, -1.8),
    (-0.90, 1.0, -1.00, 0.0, 0.0),
    (0.80, 1.0, 0.75, -1.6875, -1.61875),
    (-0.80, 1.0, -0.75, -0.01875, -0.01875),
    (0.70, 1.0, 0.75, -1.44375, -1.44375),
    (-0.70, 1.0, -0.75, -0.04374, -0.04375),
    (0.60, 1.0, 0.50, -1.275, -1.275),
    (-0.60, 1.0, -0.50, -0.075, -0.075),
    (0.40, 1.0, 0.50, -0.975, -0.975),
    (-0.40, 1.0, -0.50, -0.175, -0.175),
    (0.30, 1.0, 0.25, -0.84375, -0.84375),
    (-0.30, 1.0, -0.25, -0.24375, -0.24375),
    (0.20, 1.0, 0.25, -0.71875, -0.71875),
    (-0.20, 1.0, -0.25, -0.31875, -0.31875),
    (0.10, 1.0, 0.00, -0.6, -0.6),
    (-0.10, 1.0, 0.00, -0.4, -0.4),
    (0.30, 0.9, 0.25, -0.88542, -0.88542),
    (-0.30, 0.9, -0.25, -0.21875, -0.21875),
    (1.0, 7.0, 0.25, -0.64732, -0.64732),
    (-1.0, 7.0, -0.25, -0.36161, -0.36161),
]

# (y, m, expected quotient, quoted iteration count)
ITERATED_DIVISION = [
    (0.25, 1.0, 0.25, 1),
    (-0.25, 1.0, -0.25, 1),
    (0.50, 1.0, 0.50, 1),
    (-0.50, 1.0, -0.50, 1),
    (0.75, 1.0, 0.75, 1),
    (-0.75, 1.0, -0.75, 1),
    (0.80, 1.0, 0.80, 5),
    (-0.80, 1.0, -0.80, 5),
    (0.70, 1.0, 0.70, 5),
    (-0.70, 1.0, -0.70, 5),
    (0.10, 1.0, 0.10, 5),
    (-0.10, 1.0, -0.10, 5),
    (0.30, 0.9, 1.0 / 3.0, 10),
    (-0.30, 0.9, -1.0 / 3.0, 10),
    (1.0, 7.0, 1.0 / 7.0, 7),
    (-1.0, 7.0, -1.0 / 7.0, 7),
]

# fixture -> (solution, ground bits, quoted energy, oracle scaled energy)
TWO_BY_TWO = {
    "1a": ((-0.25, 0.75), (0, 0, 1, 1, 0, 1, 1, 1), -2.167, -13.0 / 6.0),
    "1b": ((0.75, -0.25), (0, 1, 1, 1, 0, 0, 1, 1), -2.167, -13.0 / 6.0),
    "1c": ((1.0, 1.0), (1, 0, 0, 0, 1, 0, 0, 0), -0.444, -4.0 / 9.0),
    "1d": ((-1.0, 1.0), (0, 0, 0, 0, 1, 0, 0, 0), -1.889, -17.0 / 9.0),
    "1e": ((1.0, -1.0), (1, 0, 0, 0, 0, 0, 0, 0), -1.650, -1.625),
    "1f": ((1.0, 0.0), (0, 0, 0, 0, 0, 1, 0, 0), -2.125, -2.125),
    "1g": ((0.25, -0.5), (0, 1, 0, 1, 0, 0, 1, 0), -0.925, -0.925),
    "1h": ((0.25, 0.25), (0, 1, 0, 1, 0, 1, 0, 1), -2.03125, -2.03125),
    "1i": ((2.0, 1.0), (1, 1, 0, 0, 1, 0, 0, 0), -2.450126, None),
    "1j": ((2.0, 1.0), (1, 1, 0, 0, 1, 0, 0, 0), -2.532545, None),
}
WELL_CONDITIONED_2X2 = ("1a", "1b", "1c", "1d", "1e", "1f", "1g", "1h", "1j")

# fixture -> (solution, quoted unscaled ground energy)
THREE_BY_THREE = {
    "2a": ((0.25, -0.5, 1.0), -15.5625),
    "2b": ((0.25, -0.5, 0.0), -12.5625),
    "2c": ((0.25, 0.0, -0.5), -13.5),
    "2d": ((1.0, 0.25, -0.5), -15.6875),
    "2e": ((0.0, 0.25, -0.5), -12.75),
    "2f": ((0.0, 0.25, -0.75), -58.188),
    "2g": ((0.0, 0.25, -0.75), -557.437),
}

# fixture -> quoted condition number
CONDITION_NUMBERS = {"1i": 25.0, "1j": 5.0, "2f": 78.0, "2g": 1.0}

GRAY_4BIT = [
    "0000", "0001", "0011", "0010", "0110", "0111", "0101", "0100",
    "1100", "1101", "1111", "1110", "1010", "1011", "1001", "1000",
]
