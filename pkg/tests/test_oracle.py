import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import loc_str, lzc_str
from qlzoc.oracle import (
    BitWord, complement, flip_mask, flip_masks, loc, lzc, merge_reference, mloc,
)


def words(max_width=40):
    return st.integers(1, max_width).flatmap(
        lambda w: st.tuples(st.integers(0, (1 << w) - 1), st.just(w)))


@pytest.mark.parametrize("x,width,expected", [
    (0, 11, 11), (1, 13, 12), (291, 16, 7), (0b1000, 4, 0), (0b0001, 4, 3), (1, 1, 0), (0, 1, 1),
])
def test_lzc_values(x, width, expected):
    assert lzc(x, width) == expected


@pytest.mark.parametrize("x,width,expected", [
    (2047, 11, 11), (8190, 13, 12), (0b1111111111000011, 16, 10), (0b0111, 4, 0), (0b1110, 4, 3),
])
def test_loc_values(x, width, expected):
    assert loc(x, width) == expected


@given(words())
def test_counts_match_string_reference(xw):
    x, w = xw
    assert lzc(x, w) == lzc_str(x, w)
    assert loc(x, w) == loc_str(x, w)


@given(words())
def test_duality(xw):
    x, w = xw
    assert lzc(x, w) == loc(complement(x, w), w)
    assert complement(complement(x, w), w) == x


@given(words())
def test_mloc_equals_loc(xw):
    x, w = xw
    assert mloc(x, w) == loc(x, w)


def test_mloc_trace_records_firing_rounds():
    trace = []
    assert mloc(0b1110, 4, trace) == 3
    assert trace == [(1, 0b1), (2, 0b11), (3, 0b1)]


def test_flip_mask_examples():
    assert flip_mask(1) == (1, 0b1)
    assert flip_mask(4) == (3, 0b111)
    assert flip_mask(6) == (2, 0b11)
    with pytest.raises(ValueError):
        flip_mask(0)


@given(st.integers(1, 1 << 40))
def test_flip_mask_identity(i):
    n, delta = flip_mask(i)
    assert (i - 1) ^ i == delta == (1 << n) - 1
    assert i % (1 << n) == 1 << (n - 1)


def test_flip_masks_vectorised_matches_scalar():
    i = np.arange(1, 5000)
    assert list(flip_masks(i)) == [flip_mask(int(k)).n for k in i]
    with pytest.raises(ValueError):
        flip_masks(np.array([0, 1]))


@pytest.mark.parametrize("gh,gl,m,expected", [(4, 2, 4, 6), (4, 4, 4, 8), (3, 4, 4, 3), (0, 1, 8, 0)])
def test_merge_reference(gh, gl, m, expected):
    assert merge_reference(gh, gl, m) == expected


@given(st.integers(0, 6), st.integers(0, 1 << 12))
def test_merge_reference_concatenation(p, pair):
    m = 1 << p
    hi, lo = (pair >> m) & ((1 << m) - 1), pair & ((1 << m) - 1)
    assert merge_reference(lzc(hi, m), lzc(lo, m), m) == lzc((hi << m) | lo, 2 * m)


def test_merge_reference_rejects_bad_input():
    with pytest.raises(ValueError):
        merge_reference(1, 1, 6)
    with pytest.raises(ValueError):
        merge_reference(5, 0, 4)


def test_bitword_validation():
    assert str(BitWord(5, 4)) == "0101"
    assert BitWord(5, 4).complement() == BitWord(10, 4)
    for value, width in [(16, 4), (-1, 4), (0, 0)]:
        with pytest.raises(ValueError):
            BitWord(value, width)
    with pytest.raises(ValueError):
        lzc(8, 3)
