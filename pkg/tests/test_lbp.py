"""
tests/test_lbp.py
LBP codes, uniform mappings, maps and histograms
"""

import numpy as np
import pytest

from features.lbp import (
    ImageTooSmallError,
    InvalidLbpParamsError,
    LbpMap,
    PatternOutOfRangeError,
    WrongNeighborCountError,
    histogram_bins,
    lbp_code,
    lbp_histogram,
    lbp_map,
    non_uniform_fraction,
    riu2_code,
    u2_lookup,
    uniformity,
)


def _rotate_bits(pattern: int, shift: int, p: int = 8) -> int:
    mask = (1 << p) - 1
    return ((pattern << shift) | (pattern >> (p - shift))) & mask


# ============================================================================
# Codes
# ============================================================================

@pytest.mark.parametrize("center,neighbors,expected", [
    (100, [100] * 8, 255),
    (100, [120, 90, 90, 90, 90, 90, 90, 90], 1),
    (255, [0] * 8, 0),
])
def test_lbp_code(center, neighbors, expected):
    assert lbp_code(center, neighbors) == expected


def test_lbp_code_neighbor_count():
    with pytest.raises(WrongNeighborCountError):
        lbp_code(10, [1, 2, 3], p=8)


@pytest.mark.parametrize("pattern,expected", [(0b11111111, 0), (0b00001111, 2), (0b01010101, 8)])
def test_uniformity(pattern, expected):
    assert uniformity(pattern) == expected


@pytest.mark.parametrize("pattern,expected", [(0b11110000, 4), (0b01010101, 9), (0b00000000, 0)])
def test_riu2_code(pattern, expected):
    assert riu2_code(pattern) == expected


def test_pattern_out_of_range():
    with pytest.raises(PatternOutOfRangeError):
        uniformity(256)
    with pytest.raises(PatternOutOfRangeError):
        riu2_code(-1)


def test_codes_invariant_under_bit_rotation():
    for pattern in range(256):
        for shift in range(1, 8):
            rotated = _rotate_bits(pattern, shift)
            assert uniformity(rotated) == uniformity(pattern)
            assert riu2_code(rotated) == riu2_code(pattern)


def test_u2_labels():
    table = u2_lookup(8)
    assert histogram_bins("u2", 8) == 59
    assert table.max() == 58
    assert len(set(table[[pattern for pattern in range(256) if uniformity(pattern) <= 2]].tolist())) == 58
    assert table[0b01010101] == 58


# ============================================================================
# Maps and Histograms
# ============================================================================

def test_constant_image_maps():
    image = np.full((12, 10), 77.0)

    plain = lbp_map(image)
    riu2 = lbp_map(image, mode="riu2")

    assert plain.codes.shape == (10, 8)
    assert np.all(plain.codes == 255)
    assert np.all(riu2.codes == 8)
    assert lbp_histogram(plain)[255] == 80


@pytest.mark.parametrize("p,r", [(8, 1), (8, 2), (16, 2), (8, 1.5), (4, 3)])
def test_map_dimensions_follow_border_exclusion(p, r, rng):
    image = rng.integers(0, 256, size=(20, 17)).astype(np.float64)
    border = int(np.ceil(r))

    lbp = lbp_map(image, p=p, r=r)

    assert lbp.codes.shape == (20 - 2 * border, 17 - 2 * border)


def test_lattice_neighbours_for_radius_one():
    image = np.zeros((3, 3))
    image[1, 2] = 50.0          # east, bit 0
    image[1, 1] = 30.0

    assert lbp_map(image).codes[0, 0] == 1


@pytest.mark.parametrize("seed", range(20))
def test_riu2_histogram_rotation_invariance(seed):
    image = np.random.Generator(np.random.PCG64(seed)).integers(0, 256, size=(32, 32)).astype(np.float64)
    expected = lbp_histogram(lbp_map(image, mode="riu2"))

    for turns in (1, 2, 3):
        rotated = lbp_histogram(lbp_map(np.rot90(image, turns), mode="riu2"))
        np.testing.assert_array_equal(rotated, expected)


def test_histogram_sums_to_pixel_count(rng):
    image = rng.integers(0, 256, size=(16, 16)).astype(np.float64)

    for mode in ("plain", "u2", "riu2"):
        lbp = lbp_map(image, mode=mode)
        histogram = lbp_histogram(lbp)
        assert histogram.sum() == 196
        assert len(histogram) == histogram_bins(mode, 8)


def test_empty_map_histogram():
    empty = LbpMap(np.zeros((0, 0), dtype=np.int64), mode="riu2")

    histogram = lbp_histogram(empty)

    assert len(histogram) == 10
    assert histogram.sum() == 0
    assert non_uniform_fraction(empty) == 0.0


def test_non_uniform_fraction_needs_riu2():
    lbp = lbp_map(np.full((5, 5), 3.0))
    with pytest.raises(InvalidLbpParamsError):
        non_uniform_fraction(lbp)


def test_vertical_stripes_are_half_non_uniform():
    stripes = np.tile((np.arange(10) % 2) * 100.0, (10, 1))

    assert non_uniform_fraction(lbp_map(stripes, mode="riu2")) == 0.5


def test_image_too_small():
    with pytest.raises(ImageTooSmallError):
        lbp_map(np.zeros((2, 8)))


@pytest.mark.parametrize("kwargs", [{"p": 0}, {"p": 17}, {"r": 0}, {"mode": "ri"}])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidLbpParamsError):
        lbp_map(np.zeros((10, 10)), **kwargs)
