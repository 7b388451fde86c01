"""
tests/test_shape.py
Shape metrics on analytic and rasterized regions
"""

import math

import numpy as np
import pytest

from features.shape import (
    DegenerateShapeError,
    EmptyRegionError,
    NonPositiveAreaError,
    NonPositiveAxisError,
    area,
    eccentricity,
    equidiameter,
    fit_axes,
    perimeter,
    shape_vector,
)
from imaging.raster import BinaryMask
from tests.conftest import disk_mask, ellipse_mask, moment_axes


def _square(side: int, size: int = None) -> BinaryMask:
    size = size or side + 4
    bits = np.zeros((size, size), dtype=bool)
    bits[2:2 + side, 2:2 + side] = True
    return BinaryMask(bits)


# ============================================================================
# Area and Perimeter
# ============================================================================

def test_square_area_and_perimeter():
    square = _square(10)
    assert area(square) == 100
    assert perimeter(square) == 36


def test_three_by_three_perimeter():
    assert perimeter(_square(3)) == 8


def test_single_pixel():
    pixel = _square(1)
    assert area(pixel) == 1
    assert perimeter(pixel) == 1


def test_image_edge_counts_as_background():
    full = BinaryMask(np.ones((5, 5), dtype=bool))
    assert perimeter(full) == 16


def test_empty_region():
    empty = BinaryMask(np.zeros((4, 4), dtype=bool))
    with pytest.raises(EmptyRegionError):
        area(empty)
    with pytest.raises(EmptyRegionError):
        perimeter(empty)


# ============================================================================
# Axes and Eccentricity
# ============================================================================

def test_disk_radius_fifty():
    disk = disk_mask(50)
    vector = shape_vector(disk)

    assert vector.area == pytest.approx(math.pi * 2500, rel=0.01)
    assert vector.majl == pytest.approx(100, abs=1)
    assert vector.minl == pytest.approx(100, abs=1)
    assert vector.eccentricity < 0.05
    assert vector.equidiameter == pytest.approx(100, abs=0.5)


@pytest.mark.parametrize("angle", [0.0, 30.0, 60.0])
def test_rotated_ellipse_axes(angle):
    ellipse = ellipse_mask(80, 40, angle_deg=angle)

    majl, minl = fit_axes(ellipse)

    assert majl == pytest.approx(160, abs=1)
    assert minl == pytest.approx(80, abs=1)


@pytest.mark.parametrize("mask", [disk_mask(17), ellipse_mask(30, 12, 45.0), ellipse_mask(25, 9, 10.0)])
def test_axes_match_moment_oracle(mask):
    majl, minl = fit_axes(mask)
    expected_majl, expected_minl = moment_axes(mask.bits)

    assert majl == pytest.approx(expected_majl, rel=1e-9)
    assert minl == pytest.approx(expected_minl, rel=1e-9)
    assert majl >= minl


def test_collinear_pixels_are_degenerate():
    bits = np.zeros((20, 5), dtype=bool)
    bits[2:18, 2] = True
    with pytest.raises(DegenerateShapeError):
        shape_vector(BinaryMask(bits))


def test_single_pixel_axes_are_degenerate():
    with pytest.raises(DegenerateShapeError):
        fit_axes(_square(1))


@pytest.mark.parametrize("majl,minl,expected", [
    (2.0, 2.0, 0.0),
    (4.0, 2.0, math.sqrt(3) / 2),
])
def test_eccentricity_examples(majl, minl, expected):
    assert eccentricity(majl, minl) == pytest.approx(expected, abs=1e-12)


def test_eccentricity_approaches_one_for_thin_shapes():
    assert eccentricity(1.0, 1e-6) == pytest.approx(1.0, abs=1e-9)
    assert eccentricity(1.0, 0.5) < eccentricity(1.0, 0.25) < eccentricity(1.0, 0.1) < 1.0


@pytest.mark.parametrize("majl,minl", [(1.0, 2.0), (1.0, 0.0), (0.0, 0.0), (2.0, -1.0)])
def test_eccentricity_rejects_bad_axes(majl, minl):
    with pytest.raises(NonPositiveAxisError):
        eccentricity(majl, minl)


# ============================================================================
# Equivalent Diameter and Invariance
# ============================================================================

@pytest.mark.parametrize("region_area,expected,tolerance", [
    (math.pi, 2.0, 1e-12),
    (16693, 145.78, 0.01),
    (18302, 152.65, 0.01),
    (400, math.sqrt(1600 / math.pi), 1e-12),
])
def test_equidiameter(region_area, expected, tolerance):
    assert equidiameter(region_area) == pytest.approx(expected, abs=tolerance)


@pytest.mark.parametrize("region_area", [0, -3.5])
def test_equidiameter_needs_positive_area(region_area):
    with pytest.raises(NonPositiveAreaError):
        equidiameter(region_area)


def test_equidiameter_inverts_to_area():
    for region_area in (1.0, 17.0, 7853.0, 16693.0):
        assert equidiameter(region_area) ** 2 * math.pi / 4 == pytest.approx(region_area, rel=1e-12)


def test_square_shape_vector():
    vector = shape_vector(_square(10))
    assert vector.area == 100
    assert vector.perimeter == 36
    assert vector.equidiameter == pytest.approx(11.28379, abs=1e-5)
    assert vector.to_array().shape == (6,)


def test_translation_invariance():
    base = ellipse_mask(20, 8, 25.0, size=60)
    shifted = BinaryMask(np.roll(np.roll(base.bits, 7, axis=0), -5, axis=1))

    np.testing.assert_allclose(shape_vector(base).to_array(), shape_vector(shifted).to_array(), rtol=1e-12)


def test_quarter_turn_invariance():
    base = ellipse_mask(22, 9, 15.0, size=60)
    turned = BinaryMask(np.rot90(base.bits))

    np.testing.assert_allclose(shape_vector(base).to_array(), shape_vector(turned).to_array(), rtol=1e-12)
