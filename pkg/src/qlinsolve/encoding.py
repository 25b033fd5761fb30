"""Fixed-point offset encoding of reals and division-free exponent offsets.

A codeword of ``R`` bits ``Q_0 Q_1 ... Q_{R-1}`` represents
``chi = sum_r 2**-r Q_r`` in ``[0, 2)`` and the real value ``x = c*chi - d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BinaryEncoding",
    "ExponentOffset",
    "decode",
    "encode_nearest",
    "floorexp",
    "exponent_offset",
    "MAX_EXPONENT_STEPS",
]

MAX_EXPONENT_STEPS = 64


@dataclass(frozen=True)
class BinaryEncoding:
    R: int = 4
    c: float = 2.0
    d: float = 1.0

    def __post_init__(self):
        if int(self.R) != self.R or self.R < 1:
            raise ValueError(f"resolution must be a positive integer, got {self.R}")
        if not self.c > 0:
            raise ValueError(f"scale c must be positive, got {self.c}")
        object.__setattr__(self, "R", int(self.R))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))

    @property
    def admissible(self) -> bool:
        """True when the range straddles zero (d > 0 and c > d/2)."""
        return self.d > 0 and self.c > self.d / 2

    @property
    def place_values(self) -> np.ndarray:
        return 2.0 ** -np.arange(self.R)

    @property
    def low(self) -> float:
        return -self.d

    @property
    def high(self) -> float:
        """Exclusive upper bound of the representable interval."""
        return 2 * self.c - self.d

    @property
    def step(self) -> float:
        return self.c * 2.0 ** -(self.R - 1)

    def grid(self) -> np.ndarray:
        """All representable values in increasing order."""
        return self.c * np.arange(1 << self.R) * 2.0 ** -(self.R - 1) - self.d


def decode(bits, enc: BinaryEncoding) -> float:
    q = np.asarray(bits, dtype=float)
    if q.shape != (enc.R,):
        raise ValueError(f"expected {enc.R} bits, got shape {q.shape}")
    return float(enc.c * (q @ enc.place_values) - enc.d)


def encode_nearest(x: float, enc: BinaryEncoding) -> np.ndarray:
    """Codeword whose decoded value is closest to ``x``; ties go to the smaller value."""
    if not (enc.low <= x < enc.high):
        raise ValueError(f"{x} lies outside [{enc.low}, {enc.high})")
    t = (x + enc.d) / enc.c * 2 ** (enc.R - 1)
    k = min(max(math.ceil(t - 0.5), 0), (1 << enc.R) - 1)
    return np.array([(k >> (enc.R - 1 - r)) & 1 for r in range(enc.R)], dtype=np.uint8)


def floorexp(value: float) -> int:
    """Integer ``e`` with ``2**e <= value < 2**(e+1)``, by doubling or halving only."""
    v = float(value)
    if not v > 0 or math.isinf(v):
        raise ValueError(f"floorexp needs a finite positive value, got {value}")
    e = 0
    steps = 0
    if v >= 1.0:
        bound = 2.0
        while v >= bound:
            bound *= 2.0
            e += 1
            steps += 1
            if steps > MAX_EXPONENT_STEPS:
                raise OverflowError(f"{value} needs more than {MAX_EXPONENT_STEPS} halvings")
    else:
        while v < 1.0:
            v *= 2.0
            e -= 1
            steps += 1
            if steps > MAX_EXPONENT_STEPS:
                raise OverflowError(f"{value} needs more than {MAX_EXPONENT_STEPS} doublings")
    return e


@dataclass(frozen=True)
class ExponentOffset:
    offset: int
    exact_zero: bool = False

    def shift(self, value: float) -> float:
        """``value * 2**-offset`` computed with ldexp, not division."""
        return math.ldexp(value, -self.offset)

    def unshift(self, value: float) -> float:
        return math.ldexp(value, self.offset)


def exponent_offset(numerator: float, denominator: float) -> ExponentOffset:
    """Power-of-two offset that brings ``numerator/denominator`` into (-1, 1].

    Uses magnitude comparisons only; the ratio is never formed.
    """
    if denominator == 0:
        raise ZeroDivisionError("exponent_offset needs a nonzero denominator")
    if numerator == 0:
        return ExponentOffset(0, exact_zero=True)
    return ExponentOffset(floorexp(abs(numerator)) - floorexp(abs(denominator)) + 1)
