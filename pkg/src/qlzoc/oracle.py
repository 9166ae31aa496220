"""Classical reference functions used as ground truth for every circuit.

Counts are plain integers.  The bit-pattern view of a count only exists in
the circuit layer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class BitWord:
    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"{self.value} does not fit in {self.width} bits")

    def complement(self) -> "BitWord":
        return BitWord(complement(self.value, self.width), self.width)

    def __str__(self):
        return format(self.value, f"0{self.width}b")


def _check(x: int, width: int) -> None:
    if width < 1 or not 0 <= x < (1 << width):
        raise ValueError(f"{x} is not a {width}-bit word")


def complement(x: int, width: int) -> int:
    _check(x, width)
    return x ^ ((1 << width) - 1)


def lzc(x: int, width: int) -> int:
    """Number of consecutive 0 bits from the MSB; ``width`` when x == 0."""
    _check(x, width)
    for gamma in range(width):
        if (x >> (width - 1 - gamma)) & 1:
            return gamma
    return width


def loc(x: int, width: int) -> int:
    """Number of consecutive 1 bits from the MSB; ``width`` when all ones."""
    _check(x, width)
    for gamma in range(width):
        if not (x >> (width - 1 - gamma)) & 1:
            return gamma
    return width


class FlipMask(NamedTuple):
    n: int
    delta: int


def flip_mask(i: int) -> FlipMask:
    """Bits that change going from i-1 to i: the n LSBs, n = 1 + trailing zeros of i."""
    if i < 1:
        raise ValueError(f"flip_mask is defined for i >= 1, got {i}")
    n = (i & -i).bit_length()
    return FlipMask(n, (1 << n) - 1)


def flip_masks(i: np.ndarray) -> np.ndarray:
    """Vectorised ``flip_mask(i).n`` over an integer array."""
    i = np.asarray(i, dtype=np.int64)
    if np.any(i < 1):
        raise ValueError("flip_masks is defined for i >= 1")
    low = i & -i
    return np.log2(low).astype(np.int64) + 1


def mloc(x: int, width: int, trace: list | None = None) -> int:
    """Leading-one count by conditional bit flips, one round per prefix length.

    Round i flips the ``flip_mask(i).n`` low bits of the accumulator when the
    top i bits of x are all ones.  When ``trace`` is a list, each firing
    round appends ``(i, delta)``.
    """
    _check(x, width)
    gamma = 0
    for i in range(1, width + 1):
        prefix = x >> (width - i)
        if prefix == (1 << i) - 1:
            delta = (i - 1) ^ i
            assert delta == flip_mask(i).delta
            gamma ^= delta
            if trace is not None:
                trace.append((i, delta))
    return gamma


def merge_reference(gamma_h: int, gamma_l: int, m: int) -> int:
    """Combine the counts of two m-bit halves: sum when the high half saturates."""
    if m < 1 or m & (m - 1):
        raise ValueError(f"merge width must be a power of two, got {m}")
    for g in (gamma_h, gamma_l):
        if not 0 <= g <= m:
            raise ValueError(f"count {g} outside [0, {m}]")
    return gamma_h + gamma_l if gamma_h == m else gamma_h
