"""
features/texture.py
Texture features: mean and standard deviation of the coarse curvelet
subband of the fruit's LBP map
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.settings import (
    DEFAULT_LBP_POINTS,
    DEFAULT_LBP_RADIUS,
    DEFAULT_N_ANGLES_COARSE,
    TEXTURE_FEATURE_NAMES,
)
from features.curvelet import coarse_subband, fdct_wrapping
from features.fourier import EmptyGridError
from features.lbp import lbp_map
from imaging.raster import BinaryMask, RasterImage, WrongChannelCountError
from utils.errors import PipelineError
from utils.logger import get_logger

logger = get_logger(__name__)


class MaskShapeMismatchError(PipelineError):
    """Image and mask have different dimensions"""
    pass


@dataclass(frozen=True)
class TextureConfig:
    """LBP and curvelet settings for texture_vector"""

    lbp_points: int = DEFAULT_LBP_POINTS
    lbp_radius: float = DEFAULT_LBP_RADIUS
    n_scales: Optional[int] = None
    n_angles_coarse: int = DEFAULT_N_ANGLES_COARSE

    def to_dict(self) -> dict:
        return {
            "lbp_points": self.lbp_points,
            "lbp_radius": self.lbp_radius,
            "n_scales": self.n_scales,
            "n_angles_coarse": self.n_angles_coarse,
        }


@dataclass(frozen=True)
class TextureVector:
    """(mu, sigma) of the approximate subband"""

    mean: float
    std: float

    def to_array(self) -> np.ndarray:
        return np.array([self.mean, self.std], dtype=np.float64)

    def to_dict(self) -> dict:
        return dict(zip(TEXTURE_FEATURE_NAMES, self.to_array().tolist()))


def texture_stats(subband) -> TextureVector:
    """
    Population mean and standard deviation of a real grid

    Example:
        texture_stats([[1, 2], [3, 4]])  # TextureVector(mean=2.5, std=1.118...)
    """
    grid = np.asarray(subband, dtype=np.float64)
    if grid.size == 0:
        raise EmptyGridError("Cannot compute statistics of an empty subband")

    mean = float(np.mean(grid))
    std = float(np.sqrt(np.mean((grid - mean) ** 2)))
    return TextureVector(mean=mean, std=std)


def masked_lbp_codes(
    image: Union[RasterImage, np.ndarray],
    mask: BinaryMask,
    config: Optional[TextureConfig] = None,
) -> np.ndarray:
    """Plain LBP codes (as reals) of the image with non-fruit pixels set to zero"""
    config = config or TextureConfig()

    if isinstance(image, RasterImage):
        if not image.is_gray:
            raise WrongChannelCountError(f"texture_vector expects a gray image, got {image.channels} channels")
        gray = image.plane(0)
    else:
        gray = np.asarray(image, dtype=np.float64)

    if gray.shape != mask.bits.shape:
        raise MaskShapeMismatchError(f"Image {gray.shape} and mask {mask.bits.shape} differ in size")

    masked = np.where(mask.bits, gray, 0.0)
    codes = lbp_map(masked, p=config.lbp_points, r=config.lbp_radius, mode="plain").codes
    return codes.astype(np.float64)


def texture_vector(
    image: Union[RasterImage, np.ndarray],
    mask: BinaryMask,
    config: Optional[TextureConfig] = None,
) -> TextureVector:
    """
    Texture features of the fruit region

    Zeroes non-mask pixels, computes the plain LBP map, runs the curvelet
    transform on it and summarizes the coarse subband.

    Raises:
        MaskShapeMismatchError: Image and mask sizes differ
        ImageTooSmallError: LBP map smaller than 32x32
    """
    config = config or TextureConfig()
    codes = masked_lbp_codes(image, mask, config)

    coeffs = fdct_wrapping(
        codes,
        n_scales=config.n_scales,
        n_angles_coarse=config.n_angles_coarse,
        coarse_only=True,
    )
    vector = texture_stats(coarse_subband(coeffs))
    logger.debug(f"Texture vector: {vector.to_dict()} from {coeffs!r}")
    return vector


__all__ = [
    'MaskShapeMismatchError',
    'TextureConfig',
    'TextureVector',
    'texture_stats',
    'masked_lbp_codes',
    'texture_vector',
]
