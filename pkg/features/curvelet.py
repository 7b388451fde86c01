"""
features/curvelet.py
Fast discrete curvelet transform via wrapping, and its adjoint

The frequency plane is split by smooth radial windows into n_scales rings
and each ring (except the coarsest) into angular wedges. The squared
windows sum to one at every frequency, so the transform is a tight frame:
coefficient energy equals image energy and the adjoint is the inverse.

Frequencies are normalized so that w = f / (N / 2) lies in [-1, 1).

    phi(t) = 1                            t <= 1
           = cos(pi/2 * nu(t - 1))        1 < t < 2
           = 0                            t >= 2
    nu(s)  = s^2 (3 - 2 s)

    P_j(w) = (phi(|w1| / r_j) phi(|w2| / r_j))^2,  r_j = 2^(j - J + 1),  P_{J-1} = 1
    coarse window  = sqrt(P_0)
    ring window j  = sqrt(P_j - P_{j-1})

Each windowed wedge is wrapped onto the smallest rectangle that holds its
support without collisions and brought back to space with an inverse FFT.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

import numpy as np

from config.settings import (
    ANGULAR_TRANSITION,
    DEFAULT_N_ANGLES_COARSE,
    MIN_CURVELET_SIZE,
    MIN_N_SCALES,
)
from features.lbp import ImageTooSmallError
from imaging.raster import RasterImage, WrongChannelCountError
from utils.errors import ConfigError, PipelineError
from utils.logger import get_logger

logger = get_logger(__name__)


# ============================================================================
# Exceptions
# ============================================================================

class CurveletError(PipelineError):
    """Base class for curvelet transform errors"""
    pass


class BadAngleCountError(CurveletError, ConfigError):
    """n_angles_coarse must be a multiple of 4 and at least 8"""
    pass


class BadScaleCountError(CurveletError, ConfigError):
    """n_scales must be at least 2"""
    pass


class IncompleteCoefficientsError(CurveletError):
    """Coefficients computed with coarse_only cannot be inverted"""
    pass


# ============================================================================
# Window Profiles
# ============================================================================

def _smoothstep(s: np.ndarray) -> np.ndarray:
    s = np.clip(s, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


def _radial_profile(t: np.ndarray) -> np.ndarray:
    profile = np.ones_like(t)
    transition = (t > 1.0) & (t < 2.0)
    profile[transition] = np.cos(0.5 * np.pi * _smoothstep(t[transition] - 1.0))
    profile[t >= 2.0] = 0.0
    return profile


def _lowpass_squared(w1: np.ndarray, w2: np.ndarray, radius: float) -> np.ndarray:
    return (_radial_profile(np.abs(w1) / radius) * _radial_profile(np.abs(w2) / radius)) ** 2


def _angular_window(u: np.ndarray, wedge: int, n_angles: int) -> np.ndarray:
    """
    Wedge `wedge` of n_angles covering u in [wedge, wedge + 1) with
    sin/cos transitions of half-width ANGULAR_TRANSITION around both edges
    """
    delta = ANGULAR_TRANSITION
    d = np.mod(u - wedge + delta, n_angles)
    window = np.zeros_like(u)

    rising = d < 2.0 * delta
    window[rising] = np.sin(0.5 * np.pi * _smoothstep(d[rising] / (2.0 * delta)))

    window[(d >= 2.0 * delta) & (d <= 1.0)] = 1.0

    falling = (d > 1.0) & (d < 1.0 + 2.0 * delta)
    window[falling] = np.cos(0.5 * np.pi * _smoothstep((d[falling] - 1.0) / (2.0 * delta)))
    return window


def angles_at_scale(scale: int, n_angles_coarse: int) -> int:
    """Wedge count at scale >= 1; doubles every other scale"""
    if scale < 1:
        return 1
    return n_angles_coarse * 2 ** math.ceil((scale - 1) / 2)


def default_n_scales(shape: Tuple[int, int]) -> int:
    """ceil(log2(min(M, N))) - 3"""
    return int(math.ceil(math.log2(min(shape)))) - 3


# ============================================================================
# Layout
# ============================================================================

@dataclass(frozen=True, eq=False)
class _Tile:
    key: Tuple[int, int]
    shape: Tuple[int, int]
    freq_index: np.ndarray
    tile_index: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class _Layout:
    image_shape: Tuple[int, int]
    n_scales: int
    n_angles_coarse: int
    coarse: _Tile
    tiles: Tuple[_Tile, ...]


def _per_line_span(line_index: np.ndarray, values: np.ndarray, n_lines: int) -> int:
    lows = np.full(n_lines, np.iinfo(np.int64).max, dtype=np.int64)
    highs = np.full(n_lines, np.iinfo(np.int64).min, dtype=np.int64)
    np.minimum.at(lows, line_index, values)
    np.maximum.at(highs, line_index, values)
    used = highs >= lows
    return int((highs[used] - lows[used] + 1).max())


def _wrap_tile(key, window: np.ndarray, freq1: np.ndarray, freq2: np.ndarray) -> _Tile:
    n1, n2 = window.shape
    rows_idx, cols_idx = np.nonzero(window > 0.0)

    if rows_idx.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return _Tile(key, (1, 1), empty, empty, np.zeros(0))

    f1 = freq1[rows_idx]
    f2 = freq2[cols_idx]

    # rows spanning f1, columns wide enough for the widest row, or the transpose
    shape_a = (int(f1.max() - f1.min() + 1), _per_line_span(rows_idx, f2, n1))
    shape_b = (_per_line_span(cols_idx, f1, n2), int(f2.max() - f2.min() + 1))
    shape = shape_b if shape_b[0] * shape_b[1] < shape_a[0] * shape_a[1] else shape_a

    tile_index = np.mod(f1, shape[0]) * shape[1] + np.mod(f2, shape[1])
    return _Tile(
        key=key,
        shape=shape,
        freq_index=rows_idx * n2 + cols_idx,
        tile_index=tile_index.astype(np.int64),
        weights=window[rows_idx, cols_idx],
    )


@lru_cache(maxsize=16)
def _build_layout(image_shape: Tuple[int, int], n_scales: int, n_angles_coarse: int, coarse_only: bool) -> _Layout:
    n1, n2 = image_shape
    freq1 = np.rint(np.fft.fftfreq(n1) * n1).astype(np.int64)
    freq2 = np.rint(np.fft.fftfreq(n2) * n2).astype(np.int64)
    w1 = (freq1 / (n1 / 2.0))[:, np.newaxis]
    w2 = (freq2 / (n2 / 2.0))[np.newaxis, :]

    def lowpass(scale: int) -> np.ndarray:
        if scale >= n_scales - 1:
            return np.ones((n1, n2))
        return _lowpass_squared(w1, w2, 2.0 ** (scale - n_scales + 1))

    previous = lowpass(0)
    coarse = _wrap_tile((0, 0), np.sqrt(previous), freq1, freq2)

    tiles = []
    if not coarse_only:
        u_unit = np.arctan2(np.broadcast_to(w1, (n1, n2)), np.broadcast_to(w2, (n1, n2))) / (2.0 * np.pi)
        for scale in range(1, n_scales):
            current = lowpass(scale)
            ring = np.sqrt(np.maximum(current - previous, 0.0))
            previous = current

            n_angles = angles_at_scale(scale, n_angles_coarse)
            u = np.mod(n_angles * u_unit, n_angles)
            for wedge in range(n_angles):
                window = ring * _angular_window(u, wedge, n_angles)
                tiles.append(_wrap_tile((scale, wedge), window, freq1, freq2))

    logger.debug(
        f"Built curvelet layout {n1}x{n2}, scales={n_scales}, angles={n_angles_coarse}, "
        f"tiles={1 + len(tiles)}"
    )
    return _Layout(image_shape, n_scales, n_angles_coarse, coarse, tuple(tiles))


# ============================================================================
# Coefficients
# ============================================================================

@dataclass(frozen=True, eq=False)
class CurveletCoeffs:
    """
    Curvelet coefficients

    Attributes:
        n_scales: Number of scales including the coarse one
        n_angles_coarse: Wedges at the second-coarsest scale
        image_shape: (rows, cols) of the transformed image
        coarse: Lowpass tile (scale 0, isotropic)
        tiles: {(scale, wedge): tile} for scales 1 .. n_scales - 1
        real_input: The transformed image was real-valued
        coarse_only: Only the coarse tile was computed
    """

    n_scales: int
    n_angles_coarse: int
    image_shape: Tuple[int, int]
    coarse: np.ndarray
    tiles: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    real_input: bool = True
    coarse_only: bool = False

    @property
    def coarse_shape(self) -> Tuple[int, int]:
        return tuple(self.coarse.shape)

    @property
    def angles_per_scale(self) -> Tuple[int, ...]:
        return tuple(angles_at_scale(j, self.n_angles_coarse) for j in range(self.n_scales))

    def tile_shape(self, scale: int, wedge: int = 0) -> Tuple[int, int]:
        if scale == 0:
            return self.coarse_shape
        return tuple(self.tiles[(scale, wedge)].shape)

    def energy(self) -> float:
        """Sum of |c|^2 over every stored tile"""
        total = float(np.sum(np.abs(self.coarse) ** 2))
        for tile in self.tiles.values():
            total += float(np.sum(np.abs(tile) ** 2))
        return total

    def __repr__(self):
        return (
            f"CurveletCoeffs({self.image_shape[0]}x{self.image_shape[1]}, scales={self.n_scales}, "
            f"tiles={1 + len(self.tiles)}, coarse={self.coarse_shape})"
        )


def _as_real_grid(image: Union[RasterImage, np.ndarray]) -> np.ndarray:
    if isinstance(image, RasterImage):
        if not image.is_gray:
            raise WrongChannelCountError(f"Curvelet transform expects a gray image, got {image.channels} channels")
        return image.plane(0)
    grid = np.asarray(image)
    if grid.ndim != 2:
        raise WrongChannelCountError(f"Curvelet transform expects a 2-D grid, got shape {grid.shape}")
    return grid if np.iscomplexobj(grid) else grid.astype(np.float64)


def fdct_wrapping(
    image: Union[RasterImage, np.ndarray],
    n_scales: Optional[int] = None,
    n_angles_coarse: int = DEFAULT_N_ANGLES_COARSE,
    coarse_only: bool = False,
) -> CurveletCoeffs:
    """
    Forward curvelet transform via wrapping

    Args:
        image: Gray image or 2-D grid, at least 32x32
        n_scales: Scale count (default ceil(log2(min(M, N))) - 3)
        n_angles_coarse: Wedges at the second-coarsest scale
        coarse_only: Compute only the lowpass tile

    Returns:
        CurveletCoeffs

    Raises:
        ImageTooSmallError: Either dimension below 32
        BadAngleCountError: n_angles_coarse not a multiple of 4 or below 8
        BadScaleCountError: n_scales below 2

    Example:
        coeffs = fdct_wrapping(lbp_codes, n_scales=4, n_angles_coarse=16)
        approx = coarse_subband(coeffs)
    """
    grid = _as_real_grid(image)
    n1, n2 = grid.shape

    if min(n1, n2) < MIN_CURVELET_SIZE:
        raise ImageTooSmallError(
            f"Curvelet transform needs at least {MIN_CURVELET_SIZE}x{MIN_CURVELET_SIZE}, got {n2}x{n1}"
        )

    if isinstance(n_angles_coarse, bool) or not isinstance(n_angles_coarse, (int, np.integer)) \
            or n_angles_coarse < 8 or n_angles_coarse % 4 != 0:
        raise BadAngleCountError(f"n_angles_coarse must be a multiple of 4 and >= 8, got {n_angles_coarse!r}")

    if n_scales is None:
        n_scales = default_n_scales((n1, n2))
    if isinstance(n_scales, bool) or not isinstance(n_scales, (int, np.integer)) or n_scales < MIN_N_SCALES:
        raise BadScaleCountError(f"n_scales must be an integer >= {MIN_N_SCALES}, got {n_scales!r}")

    layout = _build_layout((n1, n2), int(n_scales), int(n_angles_coarse), bool(coarse_only))
    spectrum = (np.fft.fft2(grid) / math.sqrt(n1 * n2)).ravel()

    def forward(tile: _Tile) -> np.ndarray:
        rows, cols = tile.shape
        wrapped = np.zeros(rows * cols, dtype=np.complex128)
        wrapped[tile.tile_index] = spectrum[tile.freq_index] * tile.weights
        return np.fft.ifft2(wrapped.reshape(rows, cols)) * math.sqrt(rows * cols)

    coarse = forward(layout.coarse)
    tiles = {tile.key: forward(tile) for tile in layout.tiles}

    return CurveletCoeffs(
        n_scales=int(n_scales),
        n_angles_coarse=int(n_angles_coarse),
        image_shape=(n1, n2),
        coarse=coarse,
        tiles=tiles,
        real_input=not np.iscomplexobj(grid),
        coarse_only=bool(coarse_only),
    )


def ifdct_wrapping(coeffs: CurveletCoeffs) -> np.ndarray:
    """
    Adjoint transform: unwrap, multiply by the windows, sum, inverse FFT

    For a tight frame this is the exact inverse.

    Returns:
        Reconstructed grid (real when the input was real)

    Raises:
        IncompleteCoefficientsError: Coefficients were computed with coarse_only
    """
    if coeffs.coarse_only:
        raise IncompleteCoefficientsError("Cannot invert coefficients computed with coarse_only=True")

    n1, n2 = coeffs.image_shape
    layout = _build_layout((n1, n2), coeffs.n_scales, coeffs.n_angles_coarse, False)
    spectrum = np.zeros(n1 * n2, dtype=np.complex128)

    def accumulate(tile: _Tile, values: np.ndarray):
        rows, cols = tile.shape
        wrapped = (np.fft.fft2(values) / math.sqrt(rows * cols)).ravel()
        spectrum[tile.freq_index] += wrapped[tile.tile_index] * tile.weights

    accumulate(layout.coarse, coeffs.coarse)
    for tile in layout.tiles:
        accumulate(tile, coeffs.tiles[tile.key])

    grid = np.fft.ifft2(spectrum.reshape(n1, n2)) * math.sqrt(n1 * n2)
    return grid.real if coeffs.real_input else grid


def coarse_subband(coeffs: CurveletCoeffs) -> np.ndarray:
    """Real part of the coarsest (lowpass) tile"""
    return np.real(coeffs.coarse).copy()


__all__ = [
    'CurveletError',
    'BadAngleCountError',
    'BadScaleCountError',
    'IncompleteCoefficientsError',
    'ImageTooSmallError',
    'CurveletCoeffs',
    'angles_at_scale',
    'default_n_scales',
    'fdct_wrapping',
    'ifdct_wrapping',
    'coarse_subband',
]
