"""
features/fourier.py
2-D discrete Fourier transform helpers
"""

import numpy as np

from utils.errors import PipelineError


class EmptyGridError(PipelineError):
    """Grid has a zero-length dimension"""
    pass


def _as_grid(grid) -> np.ndarray:
    array = np.asarray(grid)
    if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
        raise EmptyGridError(f"Expected a non-empty 2-D grid, got shape {array.shape}")
    return array.astype(np.complex128)


def fft2(grid) -> np.ndarray:
    """
    Forward unnormalized DFT, X[k1, k2] = sum x[t1, t2] exp(-2 pi i (k1 t1 / M + k2 t2 / N))

    Any sizes are accepted.
    """
    return np.fft.fft2(_as_grid(grid))


def ifft2(grid) -> np.ndarray:
    """Inverse DFT with the 1 / (M N) factor"""
    return np.fft.ifft2(_as_grid(grid))


__all__ = ['EmptyGridError', 'fft2', 'ifft2']
