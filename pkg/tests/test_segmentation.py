"""
tests/test_segmentation.py
Otsu thresholding, component selection and hole filling
"""

import numpy as np
import pytest
from scipy import ndimage

from imaging.raster import BinaryMask, from_array
from imaging.segmentation import (
    ConstantImageError,
    fill_holes,
    largest_component,
    otsu_threshold,
    segment_fruit,
    threshold_segment,
)
from tests.conftest import disk_mask


def _between_class_variance(samples: np.ndarray, t: int) -> float:
    values = np.floor(samples).ravel()
    low, high = values[values < t], values[values >= t]
    if low.size == 0 or high.size == 0:
        return 0.0
    return float(low.size) * float(high.size) * (low.mean() - high.mean()) ** 2


def test_bimodal_image_mask_is_the_dark_region():
    gray = np.full((20, 30), 200.0)
    gray[5:15, 8:20] = 50.0

    mask = threshold_segment(gray)

    np.testing.assert_array_equal(mask.bits, gray == 50.0)


@pytest.mark.parametrize("seed", range(5))
def test_threshold_maximizes_between_class_variance(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = np.concatenate([
        rng.normal(60, 15, 400), rng.normal(190, 20, 600),
    ]).clip(0, 255).reshape(25, 40)

    t = otsu_threshold(samples)
    scores = [_between_class_variance(samples, c) for c in range(1, 256)]

    assert _between_class_variance(samples, t) == pytest.approx(max(scores), rel=1e-12)


def test_two_pixel_image():
    gray = np.array([[0.0, 255.0]])

    mask = threshold_segment(gray)

    assert mask.bits.tolist() == [[True, False]]


def test_constant_image():
    with pytest.raises(ConstantImageError):
        otsu_threshold(np.full((5, 5), 77.0))


@pytest.mark.parametrize("seed", range(5))
def test_inverted_image_gives_complementary_mask(seed):
    rng = np.random.Generator(np.random.PCG64(100 + seed))
    gray = np.concatenate([
        rng.normal(70, 20, 500), rng.normal(180, 25, 700),
    ]).clip(0, 255).round().reshape(30, 40)
    inverted = 255.0 - gray

    mask = threshold_segment(gray).bits
    inverted_mask = threshold_segment(inverted).bits

    # the inverted split at t' corresponds to threshold 256 - t' on the original
    t = otsu_threshold(gray)
    mirrored = 256 - otsu_threshold(inverted)
    low, high = min(t, mirrored), max(t, mirrored)
    disagree = mask == inverted_mask
    assert np.all((gray[disagree] >= low) & (gray[disagree] < high))


def test_ring_fills_to_disk():
    outer = disk_mask(10, size=30)
    inner = disk_mask(5, size=30)
    ring = BinaryMask(outer.bits & ~inner.bits)

    assert fill_holes(ring).same_bits(outer)


def test_fill_is_idempotent_on_solid_mask():
    solid = disk_mask(8, size=24)
    assert fill_holes(solid).same_bits(solid)


@pytest.mark.parametrize("seed", range(5))
def test_fill_only_adds_foreground(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    bits = rng.random((20, 20)) < 0.55

    filled = fill_holes(BinaryMask(bits)).bits

    assert np.all(filled[bits])
    assert fill_holes(BinaryMask(filled)).same_bits(BinaryMask(filled))


def test_channel_to_border_stays_background():
    bits = np.zeros((15, 15), dtype=bool)
    bits[2:13, 2:13] = True
    bits[5:10, 5:10] = False
    bits[7, 0:6] = False

    filled = fill_holes(BinaryMask(bits)).bits

    # oracle: background reachable from the border (4-connected) stays background
    labels, _ = ndimage.label(~bits)
    border_labels = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])))
    reachable = np.isin(labels, list(border_labels - {0}))
    np.testing.assert_array_equal(filled, ~reachable)
    assert not filled[7, 6]


def test_largest_component_uses_eight_connectivity():
    bits = np.zeros((10, 10), dtype=bool)
    bits[1, 1] = bits[2, 2] = bits[3, 3] = True   # diagonal chain of 3
    bits[7, 7] = bits[7, 8] = True

    kept = largest_component(BinaryMask(bits)).bits

    assert kept.sum() == 3
    assert kept[2, 2]


def test_segment_fruit_keeps_one_filled_region():
    gray = np.full((40, 40), 240.0)
    region = disk_mask(10, size=40).bits
    gray[region] = 70.0
    gray[20, 20] = 250.0          # bright speck inside the fruit
    gray[2, 2] = 60.0             # dark speck in the background

    mask = segment_fruit(from_array(gray))

    np.testing.assert_array_equal(mask.bits, region)
