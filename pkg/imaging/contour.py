"""
imaging/contour.py
Sobel gradient of the fruit mask and ordered Moore boundary tracing
"""

from typing import Tuple

import numpy as np
from scipy import ndimage

from imaging.raster import BinaryMask, Contour
from imaging.segmentation import largest_component
from utils.errors import PipelineError
from utils.logger import get_logger

logger = get_logger(__name__)

# Clockwise Moore neighbourhood with rows growing downward: N, NE, E, SE, S, SW, W, NW
MOORE_OFFSETS = (
    (-1, 0), (-1, 1), (0, 1), (1, 1),
    (1, 0), (1, -1), (0, -1), (-1, -1),
)
_OFFSET_INDEX = {offset: i for i, offset in enumerate(MOORE_OFFSETS)}


class ContourError(PipelineError):
    """Base class for contour extraction errors"""
    pass


class EmptyMaskError(ContourError):
    """Mask has no foreground pixels"""
    pass


class ForegroundTouchesBorderError(ContourError):
    """Traced component reaches the image border; its contour would be open"""
    pass


def sobel_gradients(mask: BinaryMask) -> Tuple[np.ndarray, np.ndarray]:
    """
    Horizontal and vertical 3x3 Sobel responses of the 0/1 mask

    Borders use replicate padding.

    Returns:
        (gx, gy) float64 grids
    """
    values = mask.bits.astype(np.float64)
    gx = ndimage.sobel(values, axis=1, mode="nearest")
    gy = ndimage.sobel(values, axis=0, mode="nearest")
    return gx, gy


def gradient_magnitude(mask: BinaryMask) -> np.ndarray:
    """sqrt(gx^2 + gy^2) of the Sobel responses"""
    gx, gy = sobel_gradients(mask)
    return np.hypot(gx, gy)


def moore_trace(bits: np.ndarray) -> np.ndarray:
    """
    Clockwise Moore trace of a single 8-connected component

    Starts at the topmost-then-leftmost pixel with its west neighbour as the
    backtrack point and stops when a (pixel, backtrack) state repeats, which
    includes re-entering the start the way it was first entered. The start
    appears once; the contour closes from the last point back to it.

    Args:
        bits: (h, w) bool grid holding one component that avoids the border

    Returns:
        (n, 2) int array of (row, col) points in trace order
    """
    rows, cols = np.nonzero(bits)
    top = rows.min()
    start = (int(top), int(cols[rows == top].min()))
    backtrack = (start[0], start[1] - 1)

    points = [start]
    seen = {(start, backtrack)}
    current = start
    limit = 4 * int(rows.size) + 8

    for _ in range(limit):
        direction = _OFFSET_INDEX[(backtrack[0] - current[0], backtrack[1] - current[1])]

        found = None
        previous = backtrack
        for step in range(1, 9):
            dy, dx = MOORE_OFFSETS[(direction + step) % 8]
            candidate = (current[0] + dy, current[1] + dx)
            if bits[candidate]:
                found = candidate
                break
            previous = candidate

        if found is None:
            # isolated pixel
            break

        state = (found, previous)
        if state in seen:
            break
        seen.add(state)

        points.append(found)
        current, backtrack = found, previous
    else:
        logger.warning(f"Contour trace hit its iteration cap ({limit}) at {current}")

    # closure back onto the start is implicit
    if len(points) > 1 and points[-1] == start:
        points.pop()

    return np.asarray(points, dtype=np.int64)


def sobel_contour(mask: BinaryMask) -> Tuple[Contour, np.ndarray]:
    """
    Gradient magnitude of the mask and the traced contour of its largest component

    Args:
        mask: Fruit mask

    Returns:
        (Contour, gradient magnitude grid)

    Raises:
        EmptyMaskError: No foreground
        ForegroundTouchesBorderError: The largest component reaches the border

    Example:
        contour, magnitude = sobel_contour(segment_fruit(gray))
    """
    if mask.is_empty:
        raise EmptyMaskError("Cannot extract a contour from an empty mask")

    magnitude = gradient_magnitude(mask)
    component = largest_component(mask).bits

    if component[0, :].any() or component[-1, :].any() or component[:, 0].any() or component[:, -1].any():
        raise ForegroundTouchesBorderError("Fruit region touches the image border")

    points = moore_trace(component)
    logger.debug(f"Traced contour with {len(points)} points")
    return Contour(points), magnitude


__all__ = [
    'ContourError',
    'EmptyMaskError',
    'ForegroundTouchesBorderError',
    'MOORE_OFFSETS',
    'sobel_gradients',
    'gradient_magnitude',
    'moore_trace',
    'sobel_contour',
]
