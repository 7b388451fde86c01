"""
features/lbp.py
Local binary patterns: per-pixel codes, uniformity, rotation-invariant
uniform mapping, code maps and histograms
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from config.settings import DEFAULT_LBP_POINTS, DEFAULT_LBP_RADIUS, LBP_MODES, LBP_TIE_TOLERANCE
from imaging.raster import RasterImage, WrongChannelCountError
from utils.errors import ConfigError, PipelineError
from utils.logger import get_logger
from utils.validators import require, validate_choice, validate_positive

logger = get_logger(__name__)

MAX_LBP_POINTS = 16

# Sampling offsets are rounded so that lattice positions come out exact
OFFSET_DECIMALS = 12


# ============================================================================
# Exceptions
# ============================================================================

class LbpError(PipelineError):
    """Base class for LBP errors"""
    pass


class WrongNeighborCountError(LbpError):
    """Neighbour sequence length differs from p"""
    pass


class PatternOutOfRangeError(LbpError):
    """Pattern is outside [0, 2^p - 1]"""
    pass


class ImageTooSmallError(LbpError):
    """Image leaves no pixel after border exclusion"""
    pass


class InvalidLbpParamsError(ConfigError):
    """Unsupported neighbour count, radius or mode"""
    pass


# ============================================================================
# Per-pattern Operations
# ============================================================================

def _check_points(p: int):
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or not 1 <= p <= MAX_LBP_POINTS:
        raise InvalidLbpParamsError(f"p must be an integer in [1, {MAX_LBP_POINTS}], got {p!r}")


def _check_pattern(pattern: int, p: int):
    _check_points(p)
    if not 0 <= pattern < (1 << p):
        raise PatternOutOfRangeError(f"Pattern {pattern} outside [0, {(1 << p) - 1}] for p={p}")


def lbp_code(center: float, neighbors: Sequence[float], p: int = None) -> int:
    """
    Sum over k of s(g_k - g_c) 2^k with s(x) = 1 for x >= 0

    Args:
        center: Centre value g_c
        neighbors: Values g_0 .. g_{p-1}
        p: Expected neighbour count (defaults to len(neighbors))

    Raises:
        WrongNeighborCountError: len(neighbors) != p

    Example:
        lbp_code(100, [120, 90, 90, 90, 90, 90, 90, 90])  # 1
    """
    neighbors = list(neighbors)
    p = len(neighbors) if p is None else p
    if len(neighbors) != p or p < 1:
        raise WrongNeighborCountError(f"Expected {p} neighbours, got {len(neighbors)}")

    code = 0
    for k, value in enumerate(neighbors):
        if value - center >= 0:
            code |= 1 << k
    return code


def uniformity(pattern: int, p: int = DEFAULT_LBP_POINTS) -> int:
    """
    Circular count of 0/1 transitions, wraparound term included

    Example:
        uniformity(0b00001111)  # 2
    """
    _check_pattern(pattern, p)
    bits = [(pattern >> k) & 1 for k in range(p)]
    return sum(bits[k] != bits[k - 1] for k in range(p))


def riu2_code(pattern: int, p: int = DEFAULT_LBP_POINTS) -> int:
    """Popcount for uniform patterns (U <= 2), p + 1 otherwise"""
    if uniformity(pattern, p) <= 2:
        return bin(pattern).count("1")
    return p + 1


@lru_cache(maxsize=None)
def u2_lookup(p: int) -> np.ndarray:
    """
    Map every pattern to its uniform label

    Uniform patterns get labels 0 .. p(p-1)+1 in increasing pattern order;
    all non-uniform patterns share label p(p-1)+2.
    """
    _check_points(p)
    table = np.empty(1 << p, dtype=np.int64)
    non_uniform = p * (p - 1) + 2
    label = 0
    for pattern in range(1 << p):
        if uniformity(pattern, p) <= 2:
            table[pattern] = label
            label += 1
        else:
            table[pattern] = non_uniform
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def riu2_lookup(p: int) -> np.ndarray:
    _check_points(p)
    table = np.array([riu2_code(pattern, p) for pattern in range(1 << p)], dtype=np.int64)
    table.setflags(write=False)
    return table


def histogram_bins(mode: str, p: int) -> int:
    """Number of distinct codes: 2^p (plain), p+2 (riu2), p(p-1)+3 (u2)"""
    if mode == "plain":
        return 1 << p
    if mode == "riu2":
        return p + 2
    return p * (p - 1) + 3


# ============================================================================
# Maps
# ============================================================================

@dataclass(frozen=True, eq=False)
class LbpMap:
    """LBP codes of the interior pixels of an image"""

    codes: np.ndarray
    mode: str = "plain"
    p: int = DEFAULT_LBP_POINTS
    r: float = DEFAULT_LBP_RADIUS

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64, copy=True)
        if codes.ndim != 2:
            raise LbpError(f"LBP codes must be a 2-D grid, got shape {codes.shape}")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @property
    def height(self) -> int:
        return self.codes.shape[0]

    @property
    def width(self) -> int:
        return self.codes.shape[1]

    @property
    def bin_count(self) -> int:
        return histogram_bins(self.mode, self.p)

    def __repr__(self):
        return f"LbpMap({self.mode}, P={self.p}, R={self.r}, {self.width}x{self.height})"


def sample_offsets(p: int, r: float):
    """(dy, dx) of the p circle samples; k = 0 points east, angles grow counter-clockwise"""
    offsets = []
    for k in range(p):
        theta = 2.0 * math.pi * k / p
        dy = round(-r * math.sin(theta), OFFSET_DECIMALS) + 0.0
        dx = round(r * math.cos(theta), OFFSET_DECIMALS) + 0.0
        offsets.append((dy, dx))
    return offsets


def _gray_grid(image: Union[RasterImage, np.ndarray]) -> np.ndarray:
    if isinstance(image, RasterImage):
        if not image.is_gray:
            raise WrongChannelCountError(f"LBP expects a gray image, got {image.channels} channels")
        return image.plane(0)
    grid = np.asarray(image, dtype=np.float64)
    if grid.ndim != 2:
        raise WrongChannelCountError(f"LBP expects a 2-D grid, got shape {grid.shape}")
    return grid


def lbp_map(
    image: Union[RasterImage, np.ndarray],
    p: int = DEFAULT_LBP_POINTS,
    r: float = DEFAULT_LBP_RADIUS,
    mode: str = "plain",
) -> LbpMap:
    """
    LBP code map with border exclusion of ceil(r) pixels on every side

    Non-lattice samples use bilinear interpolation. Neighbour differences
    smaller than 1e-9 in magnitude count as ties (s = 1).

    Args:
        image: Gray image or 2-D array
        p: Number of circle samples
        r: Circle radius in pixels
        mode: "plain", "u2" or "riu2"

    Returns:
        LbpMap of shape (h - 2 ceil(r), w - 2 ceil(r))

    Raises:
        ImageTooSmallError: Nothing remains after border exclusion
        InvalidLbpParamsError: Bad p, r or mode
    """
    _check_points(p)
    require(validate_positive(r, "r"), InvalidLbpParamsError)
    require(validate_choice(mode, LBP_MODES, "mode"), InvalidLbpParamsError)

    grid = _gray_grid(image)
    border = int(math.ceil(r))
    height, width = grid.shape
    out_h, out_w = height - 2 * border, width - 2 * border
    if out_h < 1 or out_w < 1:
        raise ImageTooSmallError(
            f"Image {width}x{height} is too small for an LBP radius of {r}"
        )

    center = grid[border:border + out_h, border:border + out_w]
    codes = np.zeros((out_h, out_w), dtype=np.int64)

    def window(oy: int, ox: int) -> np.ndarray:
        return grid[border + oy:border + oy + out_h, border + ox:border + ox + out_w]

    for k, (dy, dx) in enumerate(sample_offsets(p, r)):
        y0, x0 = math.floor(dy), math.floor(dx)
        fy, fx = dy - y0, dx - x0

        v00 = window(y0, x0)
        if fy == 0.0 and fx == 0.0:
            sample = v00
        else:
            v10 = window(y0 + 1, x0)
            v01 = window(y0, x0 + 1)
            v11 = window(y0 + 1, x0 + 1)
            sample = v00 + fy * (v10 - v00) + fx * (v01 - v00) + fx * fy * (v11 - v10 - v01 + v00)

        difference = sample - center
        difference = np.where(np.abs(difference) < LBP_TIE_TOLERANCE, 0.0, difference)
        codes |= (difference >= 0).astype(np.int64) << k

    if mode == "u2":
        codes = u2_lookup(p)[codes]
    elif mode == "riu2":
        codes = riu2_lookup(p)[codes]

    return LbpMap(codes=codes, mode=mode, p=p, r=float(r))


def lbp_histogram(lbp: LbpMap) -> np.ndarray:
    """
    Count of every code value; bins sum to the map's pixel count

    Example:
        lbp_histogram(lbp_map(constant_image))[255]  # every pixel
    """
    return np.bincount(lbp.codes.ravel(), minlength=lbp.bin_count)[:lbp.bin_count]


def non_uniform_fraction(lbp: LbpMap) -> float:
    """Share of riu2 codes equal to p + 1 (pixels with many transitions)"""
    if lbp.mode != "riu2":
        raise InvalidLbpParamsError("non_uniform_fraction needs a riu2 map")
    total = lbp.codes.size
    if total == 0:
        return 0.0
    return float(np.count_nonzero(lbp.codes == lbp.p + 1)) / total


__all__ = [
    'LbpError',
    'WrongNeighborCountError',
    'PatternOutOfRangeError',
    'ImageTooSmallError',
    'InvalidLbpParamsError',
    'LbpMap',
    'lbp_code',
    'uniformity',
    'riu2_code',
    'u2_lookup',
    'riu2_lookup',
    'histogram_bins',
    'sample_offsets',
    'lbp_map',
    'lbp_histogram',
    'non_uniform_fraction',
]
