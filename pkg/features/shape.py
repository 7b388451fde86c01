"""
features/shape.py
Region shape metrics: area, boundary perimeter, moment-ellipse axes,
eccentricity and equivalent diameter
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.settings import COLLINEAR_TOLERANCE, PIXEL_MOMENT_CORRECTION, SHAPE_FEATURE_NAMES
from imaging.raster import BinaryMask
from utils.errors import PipelineError
from utils.logger import get_logger

logger = get_logger(__name__)


# ============================================================================
# Exceptions
# ============================================================================

class ShapeError(PipelineError):
    """Base class for shape-metric errors"""
    pass


class EmptyRegionError(ShapeError):
    """Mask has no foreground pixels"""
    pass


class DegenerateShapeError(ShapeError):
    """Fewer than two pixels, or all pixels collinear"""
    pass


class NonPositiveAxisError(ShapeError):
    """Axis lengths must satisfy majl >= minl > 0"""
    pass


class NonPositiveAreaError(ShapeError):
    """Equivalent diameter needs a positive area"""
    pass


# ============================================================================
# Shape Vector
# ============================================================================

@dataclass(frozen=True)
class ShapeVector:
    """Six shape metrics in the fixed order A, P, MAJL, MINL, E, ED"""

    area: float
    perimeter: float
    majl: float
    minl: float
    eccentricity: float
    equidiameter: float

    def to_array(self) -> np.ndarray:
        return np.array(
            [self.area, self.perimeter, self.majl, self.minl, self.eccentricity, self.equidiameter],
            dtype=np.float64,
        )

    def to_dict(self) -> dict:
        return dict(zip(SHAPE_FEATURE_NAMES, self.to_array().tolist()))


# ============================================================================
# Metrics
# ============================================================================

def _require_foreground(mask: BinaryMask):
    if mask.is_empty:
        raise EmptyRegionError("Shape metrics need at least one foreground pixel")


def area(mask: BinaryMask) -> float:
    """Number of foreground pixels"""
    _require_foreground(mask)
    return float(mask.foreground_count)


def perimeter(mask: BinaryMask) -> float:
    """
    Number of foreground pixels with at least one background 4-neighbour

    Pixels outside the image count as background.

    Example:
        perimeter(BinaryMask(np.ones((10, 10))))  # 36.0
    """
    _require_foreground(mask)
    padded = np.pad(mask.bits, 1, constant_values=False)
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return float(np.count_nonzero(mask.bits & ~interior))


def fit_axes(mask: BinaryMask) -> Tuple[float, float]:
    """
    Major and minor axis lengths of the ellipse with the region's second moments

    Each pixel is a unit square, so 1/12 is added to mu20 and mu02 (the
    cross moment of a square is zero).

    Returns:
        (majl, minl)

    Raises:
        DegenerateShapeError: Single pixel or collinear pixels
    """
    rows, cols = np.nonzero(mask.bits)
    if rows.size < 2:
        raise DegenerateShapeError(f"Need at least two pixels to fit axes, got {rows.size}")

    y = rows - rows.mean()
    x = cols - cols.mean()
    mu20 = float(np.mean(x * x))
    mu02 = float(np.mean(y * y))
    mu11 = float(np.mean(x * y))

    trace = mu20 + mu02
    determinant = mu20 * mu02 - mu11 * mu11
    if determinant <= COLLINEAR_TOLERANCE * trace * trace:
        raise DegenerateShapeError("Foreground pixels are collinear")

    mu20 += PIXEL_MOMENT_CORRECTION
    mu02 += PIXEL_MOMENT_CORRECTION

    delta = math.sqrt((mu20 - mu02) ** 2 + 4.0 * mu11 ** 2)
    majl = 4.0 * math.sqrt((mu20 + mu02 + delta) / 2.0)
    minl = 4.0 * math.sqrt(max((mu20 + mu02 - delta) / 2.0, 0.0))
    return majl, minl


def eccentricity(majl: float, minl: float) -> float:
    """
    sqrt(a^2 - b^2) / a with a = majl / 2, b = minl / 2

    Raises:
        NonPositiveAxisError: Unless majl >= minl > 0
    """
    if not (minl > 0 and majl >= minl):
        raise NonPositiveAxisError(f"Need majl >= minl > 0, got majl={majl}, minl={minl}")

    a = majl / 2.0
    b = minl / 2.0
    return math.sqrt(a * a - b * b) / a


def equidiameter(region_area: float) -> float:
    """
    Diameter of the circle with the same area, sqrt(4 A / pi)

    Example:
        equidiameter(16693)  # 145.788...
    """
    if not region_area > 0:
        raise NonPositiveAreaError(f"Area must be positive, got {region_area}")
    return math.sqrt(4.0 * region_area / math.pi)


def shape_vector(mask: BinaryMask) -> ShapeVector:
    """Assemble (A, P, MAJL, MINL, E, ED) for a fruit mask"""
    region_area = area(mask)
    majl, minl = fit_axes(mask)

    vector = ShapeVector(
        area=region_area,
        perimeter=perimeter(mask),
        majl=majl,
        minl=minl,
        eccentricity=eccentricity(majl, minl),
        equidiameter=equidiameter(region_area),
    )
    logger.debug(f"Shape vector: {vector.to_dict()}")
    return vector


__all__ = [
    'ShapeError',
    'EmptyRegionError',
    'DegenerateShapeError',
    'NonPositiveAxisError',
    'NonPositiveAreaError',
    'ShapeVector',
    'area',
    'perimeter',
    'fit_axes',
    'eccentricity',
    'equidiameter',
    'shape_vector',
]
