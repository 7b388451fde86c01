"""
imaging/specular.py
Specular highlight removal by joint bilateral filtering of maximum chromaticity
"""

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from config.settings import (
    ACHROMATIC_TOLERANCE,
    DEFAULT_CONVERGENCE_EPSILON,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_RANGE_SIGMA,
    DEFAULT_SPATIAL_SIGMA,
    DEFAULT_WINDOW_RADIUS,
    SIGMA_RISE_TOLERANCE,
)
from imaging.raster import BinaryMask, RasterImage
from utils.errors import ConfigError, PipelineError
from utils.logger import get_logger
from utils.validators import require, validate_positive, validate_positive_int

logger = get_logger(__name__)

ONE_THIRD = 1.0 / 3.0


# ============================================================================
# Exceptions
# ============================================================================

class SpecularError(PipelineError):
    """Base class for specular-removal errors"""
    pass


class BlackPixelError(SpecularError):
    """Pixel has zero total intensity; chromaticity is undefined"""
    pass


class NegativeSampleError(SpecularError):
    """Pixel has a negative channel value"""
    pass


class AchromaticPixelError(SpecularError):
    """sigma_min is 1/3; diffuse chromaticity is singular"""
    pass


class DimensionMismatchError(SpecularError):
    """Fields passed to the bilateral filter differ in shape"""
    pass


class NotRgbError(SpecularError):
    """remove_specular requires a 3-channel image"""
    pass


class InvalidBilateralParamsError(ConfigError):
    """BilateralParams violate their invariants"""
    pass


# ============================================================================
# Per-pixel Types
# ============================================================================

@dataclass(frozen=True)
class Chromaticity:
    """Per-channel fraction of total intensity"""

    sigma_r: float
    sigma_g: float
    sigma_b: float

    @property
    def components(self) -> Tuple[float, float, float]:
        return (self.sigma_r, self.sigma_g, self.sigma_b)

    @property
    def sigma_min(self) -> float:
        return min(self.components)

    @property
    def sigma_max(self) -> float:
        return max(self.components)


@dataclass(frozen=True)
class DiffuseChromaticity:
    """Approximate diffuse chromaticity and its maximum component"""

    lambda_r: float
    lambda_g: float
    lambda_b: float

    @property
    def components(self) -> Tuple[float, float, float]:
        return (self.lambda_r, self.lambda_g, self.lambda_b)

    @property
    def lambda_max(self) -> float:
        return max(self.components)


def chromaticity(pixel: Sequence[float]) -> Chromaticity:
    """
    Chromaticity of one RGB pixel, sigma_c = J_c / (J_r + J_g + J_b)

    Raises:
        NegativeSampleError: A channel is negative
        BlackPixelError: All channels are zero

    Example:
        chromaticity((120, 60, 60))  # Chromaticity(0.5, 0.25, 0.25)
    """
    r, g, b = (float(v) for v in pixel)
    if min(r, g, b) < 0:
        raise NegativeSampleError(f"Negative channel in pixel {tuple(pixel)}")

    total = r + g + b
    if total <= 0:
        raise BlackPixelError("Chromaticity is undefined for a black pixel")

    return Chromaticity(r / total, g / total, b / total)


def diffuse_chromaticity(sigma: Chromaticity) -> DiffuseChromaticity:
    """
    lambda_c = (sigma_c - sigma_min) / (1 - 3 sigma_min)

    Raises:
        AchromaticPixelError: sigma_min within 1e-9 of 1/3
    """
    sigma_min = sigma.sigma_min
    if sigma_min >= ONE_THIRD - ACHROMATIC_TOLERANCE:
        raise AchromaticPixelError("Diffuse chromaticity is singular for an achromatic pixel")

    denominator = 1.0 - 3.0 * sigma_min
    return DiffuseChromaticity(*((c - sigma_min) / denominator for c in sigma.components))


# ============================================================================
# Filter Parameters
# ============================================================================

@dataclass(frozen=True)
class BilateralParams:
    """Joint bilateral filter and iteration settings"""

    spatial_sigma: float = DEFAULT_SPATIAL_SIGMA
    range_sigma: float = DEFAULT_RANGE_SIGMA
    window_radius: int = DEFAULT_WINDOW_RADIUS
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    convergence_epsilon: float = DEFAULT_CONVERGENCE_EPSILON

    def validate(self) -> "BilateralParams":
        """
        Check invariants

        Raises:
            InvalidBilateralParamsError: A value is non-positive or the window
                is narrower than two spatial sigmas
        """
        require(validate_positive(self.spatial_sigma, "spatial_sigma"), InvalidBilateralParamsError)
        require(validate_positive(self.range_sigma, "range_sigma"), InvalidBilateralParamsError)
        require(validate_positive_int(self.window_radius, "window_radius"), InvalidBilateralParamsError)
        require(validate_positive_int(self.max_iterations, "max_iterations"), InvalidBilateralParamsError)
        require(validate_positive(self.convergence_epsilon, "convergence_epsilon"), InvalidBilateralParamsError)

        if self.window_radius < math.ceil(2.0 * self.spatial_sigma):
            raise InvalidBilateralParamsError(
                f"window_radius ({self.window_radius}) must be >= ceil(2 * spatial_sigma) "
                f"= {math.ceil(2.0 * self.spatial_sigma)}"
            )
        return self

    def to_dict(self) -> dict:
        return {
            "spatial_sigma": self.spatial_sigma,
            "range_sigma": self.range_sigma,
            "window_radius": self.window_radius,
            "max_iterations": self.max_iterations,
            "convergence_epsilon": self.convergence_epsilon,
        }


# ============================================================================
# Field Operations
# ============================================================================

def chromaticity_fields(rgb: np.ndarray):
    """
    Vectorized chromaticity over an (h, w, 3) array

    Returns:
        (sigma (h, w, 3), active mask) where active excludes black and
        achromatic pixels; sigma is zero on black pixels
    """
    total = rgb.sum(axis=2)
    black = total <= 0
    safe_total = np.where(black, 1.0, total)
    sigma = np.where(black[..., None], 0.0, rgb / safe_total[..., None])

    sigma_min = sigma.min(axis=2)
    achromatic = sigma_min >= ONE_THIRD - ACHROMATIC_TOLERANCE
    return sigma, ~black & ~achromatic


def lambda_max_field(sigma: np.ndarray, active: np.ndarray) -> np.ndarray:
    """lambda_max = (sigma_max - sigma_min) / (1 - 3 sigma_min) on active pixels, 0 elsewhere"""
    sigma_min = sigma.min(axis=2)
    sigma_max = sigma.max(axis=2)
    denominator = np.where(active, 1.0 - 3.0 * sigma_min, 1.0)
    return np.where(active, (sigma_max - sigma_min) / denominator, 0.0)


def filter_max_chromaticity(
    sigma_max_field: np.ndarray,
    lambda_max_field: np.ndarray,
    params: BilateralParams,
    active: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Joint bilateral filter of sigma_max guided by lambda_max

    Each active output pixel is sum_q F G sigma_max(q) / sum_q F G over the
    square window, where F is a Gaussian of pixel distance and G a Gaussian of
    the lambda_max difference. Inactive pixels are copied and never used as
    neighbours.

    Args:
        sigma_max_field: (h, w) real grid
        lambda_max_field: (h, w) guidance grid
        params: Filter parameters
        active: Optional (h, w) bool grid; all pixels when None

    Returns:
        Filtered (h, w) grid

    Raises:
        DimensionMismatchError: Grids differ in shape
    """
    params.validate()

    sigma_max_field = np.asarray(sigma_max_field, dtype=np.float64)
    lambda_max_field = np.asarray(lambda_max_field, dtype=np.float64)

    if sigma_max_field.ndim != 2 or sigma_max_field.shape != lambda_max_field.shape:
        raise DimensionMismatchError(
            f"sigma_max {sigma_max_field.shape} and lambda_max {lambda_max_field.shape} differ"
        )

    if active is None:
        active = np.ones(sigma_max_field.shape, dtype=bool)
    elif active.shape != sigma_max_field.shape:
        raise DimensionMismatchError(f"active mask {active.shape} differs from {sigma_max_field.shape}")

    radius = params.window_radius
    height, width = sigma_max_field.shape
    two_spatial = 2.0 * params.spatial_sigma ** 2
    two_range = 2.0 * params.range_sigma ** 2

    padded_sigma = np.pad(sigma_max_field, radius)
    padded_lambda = np.pad(lambda_max_field, radius)
    padded_active = np.pad(active, radius, constant_values=False)

    numerator = np.zeros_like(sigma_max_field)
    denominator = np.zeros_like(sigma_max_field)

    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            spatial = math.exp(-(dy * dy + dx * dx) / two_spatial)
            if spatial == 0.0:
                continue

            rows = slice(radius + dy, radius + dy + height)
            cols = slice(radius + dx, radius + dx + width)
            neighbour_lambda = padded_lambda[rows, cols]

            weight = spatial * np.exp(-((lambda_max_field - neighbour_lambda) ** 2) / two_range)
            weight = np.where(padded_active[rows, cols], weight, 0.0)

            numerator += weight * padded_sigma[rows, cols]
            denominator += weight

    filtered = np.divide(numerator, denominator, out=sigma_max_field.copy(), where=denominator > 0)
    return np.where(active, filtered, sigma_max_field)


def max_chromaticity_passes(
    sigma_max_field: np.ndarray,
    lambda_max_field: np.ndarray,
    params: BilateralParams,
    active: Optional[np.ndarray] = None,
) -> Iterator[np.ndarray]:
    """
    Successive sigma_max <- max(sigma_max, filtered sigma_max) fields

    lambda_max stays fixed. Yields after every pass and stops once the largest
    change drops below convergence_epsilon or after max_iterations passes.
    """
    current = np.asarray(sigma_max_field, dtype=np.float64)
    if active is None:
        active = np.ones(current.shape, dtype=bool)

    for _ in range(params.max_iterations):
        filtered = filter_max_chromaticity(current, lambda_max_field, params, active)
        updated = np.where(active, np.maximum(current, filtered), current)
        change = float(np.max(np.abs(updated - current)))
        current = updated
        yield current
        if change < params.convergence_epsilon:
            return


# ============================================================================
# Highlight Removal
# ============================================================================

def _bounding_box(active: np.ndarray) -> Tuple[slice, slice]:
    rows = np.flatnonzero(active.any(axis=1))
    cols = np.flatnonzero(active.any(axis=0))
    return slice(rows[0], rows[-1] + 1), slice(cols[0], cols[-1] + 1)


def remove_specular_with_mask(
    image: RasterImage,
    params: Optional[BilateralParams] = None,
) -> Tuple[RasterImage, BinaryMask]:
    """
    Remove specular highlights and report which pixels were corrected

    Iterates sigma_max <- max(sigma_max, filtered sigma_max) with lambda_max
    fixed from the input until the largest change drops below
    convergence_epsilon or max_iterations is reached. Pixels whose sigma_max
    rose are rebuilt as I_c - s with
    s = (I_max - sigma_max * sum I) / (1 - 3 sigma_max); all others are copied.

    Returns:
        (diffuse image as float64, mask of corrected pixels)

    Raises:
        NotRgbError: Input is not 3-channel
    """
    params = (params or BilateralParams()).validate()

    if image.channels != 3:
        raise NotRgbError(f"remove_specular expects 3 channels, got {image.channels}")

    rgb = image.data.astype(np.float64)
    sigma, active = chromaticity_fields(rgb)
    changed = np.zeros(active.shape, dtype=bool)

    if not active.any():
        logger.debug("No chromatic pixels; image passes through unchanged")
        return RasterImage(rgb), BinaryMask(changed)

    rows, cols = _bounding_box(active)
    crop_rgb = rgb[rows, cols]
    crop_sigma = sigma[rows, cols]
    crop_active = active[rows, cols]

    original_max = crop_sigma.max(axis=2)
    guidance = lambda_max_field(crop_sigma, crop_active)

    current, iterations = original_max, 0
    for current in max_chromaticity_passes(original_max, guidance, params, crop_active):
        iterations += 1

    logger.debug(f"sigma_max iteration stopped after {iterations} pass(es)")

    crop_changed = crop_active & (current > original_max + SIGMA_RISE_TOLERANCE)
    denominator = 1.0 - 3.0 * current
    chromatic = np.abs(denominator) > ACHROMATIC_TOLERANCE
    fix = crop_changed & chromatic

    intensity_max = crop_rgb.max(axis=2)
    intensity_sum = crop_rgb.sum(axis=2)
    safe_denominator = np.where(fix, denominator, 1.0)
    specular = np.where(fix, (intensity_max - current * intensity_sum) / safe_denominator, 0.0)

    diffuse = np.clip(crop_rgb - specular[..., None], 0.0, rgb.max())
    crop_out = np.where(fix[..., None], diffuse, crop_rgb)

    output = rgb.copy()
    output[rows, cols] = crop_out
    changed[rows, cols] = fix

    logger.debug(f"Corrected {int(fix.sum())} specular pixel(s)")
    return RasterImage(output), BinaryMask(changed)


def remove_specular(image: RasterImage, params: Optional[BilateralParams] = None) -> RasterImage:
    """
    Diffuse (highlight-free) version of an RGB image

    Example:
        diffuse = remove_specular(load_image("date.ppm"), BilateralParams())
    """
    diffuse, _ = remove_specular_with_mask(image, params)
    return diffuse


def specular_highlight_mask(image: RasterImage, params: Optional[BilateralParams] = None) -> BinaryMask:
    """Pixels whose maximum chromaticity rose during filtering"""
    _, mask = remove_specular_with_mask(image, params)
    return mask


__all__ = [
    'SpecularError',
    'BlackPixelError',
    'NegativeSampleError',
    'AchromaticPixelError',
    'DimensionMismatchError',
    'NotRgbError',
    'InvalidBilateralParamsError',
    'Chromaticity',
    'DiffuseChromaticity',
    'BilateralParams',
    'chromaticity',
    'diffuse_chromaticity',
    'chromaticity_fields',
    'lambda_max_field',
    'filter_max_chromaticity',
    'max_chromaticity_passes',
    'remove_specular',
    'remove_specular_with_mask',
    'specular_highlight_mask',
]
