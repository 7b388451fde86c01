"""
imaging/segmentation.py
Otsu threshold segmentation, largest-component selection and hole filling
"""

from typing import Union

import numpy as np
from scipy import ndimage
from skimage.filters import threshold_otsu

from imaging.raster import BinaryMask, RasterImage, WrongChannelCountError
from utils.errors import PipelineError
from utils.logger import get_logger

logger = get_logger(__name__)

HISTOGRAM_BINS = 256

# 8-connectivity for foreground components
EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


class SegmentationError(PipelineError):
    """Base class for segmentation errors"""
    pass


class ConstantImageError(SegmentationError):
    """No threshold separates the image into two non-empty classes"""
    pass


def _gray_samples(image: Union[RasterImage, np.ndarray]) -> np.ndarray:
    if isinstance(image, RasterImage):
        if not image.is_gray:
            raise WrongChannelCountError(f"Segmentation expects a gray image, got {image.channels} channels")
        return image.plane(0)
    return np.asarray(image, dtype=np.float64)


def otsu_threshold(image: Union[RasterImage, np.ndarray]) -> int:
    """
    Otsu threshold over the 256-bin histogram of floor(value)

    Candidate thresholds t = 1..255 split the bins into [0, t) and [t, 255];
    the smallest t maximizing the between-class variance wins.

    Returns:
        Threshold t; pixels with value < t are foreground

    Raises:
        ConstantImageError: Every split leaves a class empty
    """
    samples = _gray_samples(image)
    bins = np.clip(np.floor(samples), 0, HISTOGRAM_BINS - 1).astype(np.int64)
    counts = np.bincount(bins.ravel(), minlength=HISTOGRAM_BINS)

    if np.count_nonzero(counts) < 2:
        raise ConstantImageError("Image has a single intensity level; nothing to separate")

    occupied = np.flatnonzero(counts)
    span = slice(occupied[0], occupied[-1] + 1)

    # threshold_otsu returns the last level of the low class
    last_low = threshold_otsu(hist=(counts[span], np.arange(HISTOGRAM_BINS)[span]))
    threshold = int(last_low) + 1
    logger.debug(f"Otsu threshold: {threshold}")
    return threshold


def threshold_segment(image: Union[RasterImage, np.ndarray]) -> BinaryMask:
    """
    Foreground = pixels darker than the Otsu threshold

    Example:
        mask = threshold_segment(to_gray(diffuse))
    """
    samples = _gray_samples(image)
    threshold = otsu_threshold(samples)
    return BinaryMask(samples < threshold)


def largest_component(mask: BinaryMask) -> BinaryMask:
    """Largest 8-connected foreground component; ties go to the first in raster order"""
    labels, count = ndimage.label(mask.bits, structure=EIGHT_CONNECTED)
    if count <= 1:
        return mask

    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    keep = int(np.argmax(sizes))
    logger.debug(f"Kept component {keep} of {count} ({sizes[keep]} px)")
    return BinaryMask(labels == keep)


def fill_holes(mask: BinaryMask) -> BinaryMask:
    """
    Turn background not 4-connected to the border into foreground

    Example:
        fill_holes(ring_mask)  # solid disk
    """
    return BinaryMask(ndimage.binary_fill_holes(mask.bits))


def segment_fruit(image: Union[RasterImage, np.ndarray]) -> BinaryMask:
    """Threshold, keep the largest 8-connected component, fill holes"""
    return fill_holes(largest_component(threshold_segment(image)))


__all__ = [
    'SegmentationError',
    'ConstantImageError',
    'otsu_threshold',
    'threshold_segment',
    'largest_component',
    'fill_holes',
    'segment_fruit',
]
