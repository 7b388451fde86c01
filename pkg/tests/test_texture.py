"""
tests/test_texture.py
Subband statistics and the masked LBP texture vector
"""

import numpy as np
import pytest

from features.curvelet import ImageTooSmallError
from features.fourier import EmptyGridError
from features.texture import (
    MaskShapeMismatchError,
    TextureConfig,
    texture_stats,
    texture_vector,
)
from imaging.raster import BinaryMask, from_array
from tests.conftest import ellipse_mask


def test_constant_grid():
    vector = texture_stats(np.full((4, 6), 7.0))
    assert vector.mean == 7.0
    assert vector.std == 0.0


def test_small_grid():
    vector = texture_stats([[1, 2], [3, 4]])
    assert vector.mean == pytest.approx(2.5)
    assert vector.std == pytest.approx(np.sqrt(1.25), abs=1e-12)


def test_moment_identity(rng):
    grid = rng.normal(3.0, 2.0, size=(50, 70))

    vector = texture_stats(grid)

    assert vector.std ** 2 + vector.mean ** 2 == pytest.approx(np.mean(grid ** 2), rel=1e-12)


def test_large_offset_grid_is_stable(rng):
    grid = 1e6 + rng.normal(size=(1000, 1000))

    vector = texture_stats(grid)

    mean = grid.sum() / grid.size
    two_pass = np.sqrt(((grid - mean) ** 2).sum() / grid.size)
    assert vector.std == pytest.approx(two_pass, rel=1e-12)


def test_empty_grid():
    with pytest.raises(EmptyGridError):
        texture_stats(np.zeros((0, 3)))


def test_constant_image_under_full_mask():
    image = from_array(np.full((40, 40), 90.0))
    mask = BinaryMask(np.ones((40, 40), dtype=bool))

    vector = texture_vector(image, mask)

    assert abs(vector.std) < 1e-9
    assert vector.mean > 0


def test_speckle_separates_from_smooth_surface():
    size = 72
    mask = ellipse_mask(30, 20, 0.0, size=size)
    ramp = np.tile(60.0 + 0.5 * np.arange(size), (size, 1))
    smooth = texture_vector(ramp, mask).to_array()

    speckled = []
    for seed in range(20):
        noise = np.random.Generator(np.random.PCG64(seed)).uniform(-60, 60, size=(size, size))
        speckled.append(texture_vector(ramp + noise, mask).to_array())
    speckled = np.array(speckled)

    spread = np.linalg.norm(speckled.std(axis=0))
    gap = np.linalg.norm(speckled.mean(axis=0) - smooth)
    assert gap > 10 * spread


def test_image_too_small_after_border_exclusion():
    image = np.full((33, 33), 10.0)
    with pytest.raises(ImageTooSmallError):
        texture_vector(image, BinaryMask(np.ones((33, 33), dtype=bool)))


def test_mask_shape_mismatch():
    with pytest.raises(MaskShapeMismatchError):
        texture_vector(np.zeros((40, 40)), BinaryMask(np.ones((40, 41), dtype=bool)))


def test_config_controls_angles():
    image = np.random.Generator(np.random.PCG64(3)).uniform(0, 255, size=(50, 50))
    mask = BinaryMask(np.ones((50, 50), dtype=bool))

    vector = texture_vector(image, mask, TextureConfig(n_scales=3, n_angles_coarse=8))

    assert np.all(np.isfinite(vector.to_array()))
