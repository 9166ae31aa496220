"""Built-in test vectors for the zero- and one-counting tables.

Each row keeps both published spellings of the input, decimal and binary.
Three one-count rows disagree between the two; the binary spelling is the
one whose published count is consistent, so ``word`` (the bit pattern) is
what circuits are run on and ``decimal_consistent`` flags the rest.
"""
from __future__ import annotations

from typing import NamedTuple


class Vector(NamedTuple):
    n: int
    decimal: int
    bits: str  # MSB first
    expected: int

    @property
    def word(self) -> int:
        return int(self.bits, 2)

    @property
    def decimal_consistent(self) -> bool:
        return self.word == self.decimal


LZC_VECTORS = (
    Vector(11, 0, "00000000000", 11),
    Vector(13, 1, "0000000000001", 12),
    Vector(16, 291, "0000000100100011", 7),
    Vector(20, 241, "00000000000011110001", 12),
    Vector(24, 42480, "000000001010010111110000", 8),
    Vector(28, 8388608, "0000100000000000000000000000", 4),
    Vector(32, 15790320, "00000000111100001111000011110000", 8),
)

LOC_VECTORS = (
    Vector(11, 2047, "11111111111", 11),
    Vector(13, 8190, "1111111111110", 12),
    Vector(16, 65475, "1111111111000011", 10),
    Vector(20, 1044497, "11111110111100010001", 7),
    Vector(24, 16711680, "111111110000000000000000", 8),
    Vector(28, 260046848, "1111011110000000000000000000", 4),
    Vector(32, 4043309040, "11110000111100001111000011110000", 4),
)

# Designs exercised by each table; the reconfigurable entry carries its mode bit.
LZC_FAMILIES = (("ta-op-qlzc", None), ("ta-op-pqlzc", None), ("fo-ta-op-pqlzc", None), ("reconfigurable", 1))
LOC_FAMILIES = (("ta-op-qloc", None), ("ta-op-pqloc", None), ("fo-ta-op-pqloc", None), ("reconfigurable", 0))


def tables() -> tuple[tuple[str, tuple[Vector, ...], tuple], ...]:
    return (("lzc", LZC_VECTORS, LZC_FAMILIES), ("loc", LOC_VECTORS, LOC_FAMILIES))
