"""
tests/conftest.py
Shared fixtures and rasterization helpers
"""

import math

import numpy as np
import pytest

from harness.synth import synth_dataset
from imaging.raster import BinaryMask


def disk_mask(radius: float, size: int = None, center=None) -> BinaryMask:
    """Pixels whose centre lies within radius of the centre"""
    size = size or int(2 * radius + 12)
    cy, cx = center or ((size - 1) / 2.0, (size - 1) / 2.0)
    rows, cols = np.mgrid[0:size, 0:size]
    return BinaryMask((rows - cy) ** 2 + (cols - cx) ** 2 <= radius ** 2)


def ellipse_mask(semi_major: float, semi_minor: float, angle_deg: float = 0.0, size: int = None) -> BinaryMask:
    """Rotated ellipse by centre inclusion; semi_major runs along the columns at 0 degrees"""
    size = size or int(2 * semi_major + 12)
    c = (size - 1) / 2.0
    rows, cols = np.mgrid[0:size, 0:size]
    theta = math.radians(angle_deg)
    x = (cols - c) * math.cos(theta) + (rows - c) * math.sin(theta)
    y = -(cols - c) * math.sin(theta) + (rows - c) * math.cos(theta)
    return BinaryMask((x / semi_major) ** 2 + (y / semi_minor) ** 2 <= 1.0)


def moment_axes(bits: np.ndarray):
    """Brute-force second-moment axes with the unit-square correction"""
    points = np.argwhere(bits).astype(np.float64)
    centered = points - points.mean(axis=0)
    covariance = centered.T @ centered / len(points) + np.eye(2) / 12.0
    eigenvalues = np.linalg.eigvalsh(covariance)
    return 4.0 * math.sqrt(eigenvalues[1]), 4.0 * math.sqrt(eigenvalues[0])


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """Four synthetic images per grade"""
    out_dir = tmp_path_factory.mktemp("synth")
    return synth_dataset(4, seed=7, out_dir=out_dir)
