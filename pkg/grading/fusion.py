"""
grading/fusion.py
Feature fusion, z-score normalization and Euclidean distance
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from features.shape import ShapeVector
from features.texture import TextureVector
from utils.errors import PipelineError
from utils.logger import get_logger

logger = get_logger(__name__)


# ============================================================================
# Exceptions
# ============================================================================

class FusionError(PipelineError):
    """Base class for fusion and distance errors"""
    pass


class NonFiniteInputError(FusionError):
    """A feature is NaN or infinite"""
    pass


class ZeroVarianceFeatureError(FusionError):
    """
    A feature is constant over the set

    Attributes:
        feature_index: 0-based index of the constant feature
    """

    def __init__(self, feature_index: int):
        self.feature_index = feature_index
        super().__init__(f"Feature {feature_index} has zero variance")


class TooFewVectorsError(FusionError):
    """Normalization needs at least two vectors"""
    pass


class LengthMismatchError(FusionError):
    """Vectors differ in length"""
    pass


class NormalizationMismatchError(FusionError):
    """One vector is normalized and the other is not"""
    pass


# ============================================================================
# Types
# ============================================================================

@dataclass(frozen=True, eq=False)
class FusedVector:
    """Feature vector (A, P, MAJL, MINL, E, ED, mu, sigma) or a subset of it"""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).ravel()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def select(self, indices: Sequence[int]) -> "FusedVector":
        """Subset of features (e.g. shape-only columns), keeping the flag"""
        return FusedVector(self.values[list(indices)], self.normalized)

    def __repr__(self):
        state = "normalized" if self.normalized else "raw"
        return f"FusedVector({state}, {np.array2string(self.values, precision=4)})"


@dataclass(frozen=True, eq=False)
class NormalizationStats:
    """Per-feature population mean and standard deviation of a training set"""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        for name in ("mean", "std"):
            array = np.array(getattr(self, name), dtype=np.float64, copy=True).ravel()
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def dims(self) -> int:
        return self.mean.size

    def apply(self, vector: FusedVector) -> FusedVector:
        """
        z-score a raw vector with these statistics

        Raises:
            LengthMismatchError: Dimension differs
            NormalizationMismatchError: Vector is already normalized
        """
        if vector.normalized:
            raise NormalizationMismatchError("Vector is already normalized")
        if len(vector) != self.dims:
            raise LengthMismatchError(f"Vector has {len(vector)} features, stats have {self.dims}")
        return FusedVector((vector.values - self.mean) / self.std, normalized=True)


# ============================================================================
# Operations
# ============================================================================

def fuse(shape: ShapeVector, texture: TextureVector) -> FusedVector:
    """
    Concatenate shape then texture features

    Raises:
        NonFiniteInputError: Any component is NaN or infinite

    Example:
        fuse(ShapeVector(1, 2, 3, 4, 5, 6), TextureVector(7, 8)).values  # [1..8]
    """
    values = np.concatenate([shape.to_array(), texture.to_array()])
    if not np.all(np.isfinite(values)):
        raise NonFiniteInputError(f"Non-finite feature in {values.tolist()}")
    return FusedVector(values)


def _as_matrix(vectors: Sequence[FusedVector]) -> np.ndarray:
    lengths = {len(v) for v in vectors}
    if len(lengths) > 1:
        raise LengthMismatchError(f"Vectors differ in length: {sorted(lengths)}")
    return np.vstack([v.values for v in vectors])


def compute_stats(vectors: Sequence[FusedVector]) -> NormalizationStats:
    """
    Population mean/std per feature

    Raises:
        TooFewVectorsError: Fewer than two vectors
        ZeroVarianceFeatureError: A feature is constant
    """
    if len(vectors) < 2:
        raise TooFewVectorsError(f"Normalization needs at least 2 vectors, got {len(vectors)}")
    if any(v.normalized for v in vectors):
        raise NormalizationMismatchError("Statistics must come from raw vectors")

    matrix = _as_matrix(vectors)
    mean = matrix.mean(axis=0)
    std = np.sqrt(np.mean((matrix - mean) ** 2, axis=0))

    spread = np.ptp(matrix, axis=0)
    for index in range(matrix.shape[1]):
        if spread[index] == 0 or not std[index] > 0:
            raise ZeroVarianceFeatureError(index)

    return NormalizationStats(mean=mean, std=std)


def normalize(vectors: Sequence[FusedVector]) -> Tuple[List[FusedVector], NormalizationStats]:
    """
    z-score every vector with the set's own statistics

    Returns:
        (normalized vectors, stats for applying to test vectors)
    """
    stats = compute_stats(vectors)
    return [stats.apply(v) for v in vectors], stats


def euclidean(t: FusedVector, r: FusedVector) -> float:
    """
    sqrt(sum (t_i - r_i)^2)

    Raises:
        LengthMismatchError: Lengths differ
        NormalizationMismatchError: Normalization flags differ
    """
    if len(t) != len(r):
        raise LengthMismatchError(f"Cannot compare vectors of length {len(t)} and {len(r)}")
    if t.normalized != r.normalized:
        raise NormalizationMismatchError("Cannot compare a normalized vector with a raw one")
    return float(np.sqrt(np.sum((t.values - r.values) ** 2)))


__all__ = [
    'FusionError',
    'NonFiniteInputError',
    'ZeroVarianceFeatureError',
    'TooFewVectorsError',
    'LengthMismatchError',
    'NormalizationMismatchError',
    'FusedVector',
    'NormalizationStats',
    'fuse',
    'compute_stats',
    'normalize',
    'euclidean',
]
