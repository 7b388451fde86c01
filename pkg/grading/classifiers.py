"""
grading/classifiers.py
Graders over fused feature vectors: k-nearest neighbours, nearest centroid
(reference models) and multiclass linear discriminant analysis
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from config.settings import (
    CLASSIFIER_KINDS,
    DEFAULT_K,
    DEFAULT_NORMALIZE,
    SINGULAR_COVARIANCE_TOLERANCE,
    get_error_message,
)
from grading.fusion import (
    FusedVector,
    LengthMismatchError,
    NonFiniteInputError,
    NormalizationMismatchError,
    NormalizationStats,
    compute_stats,
)
from grading.labels import ALL_GRADES, GradeLabel
from utils.errors import ConfigError, PipelineError
from utils.logger import get_logger
from utils.validators import require, validate_choice, validate_positive_int

logger = get_logger(__name__)

VectorLike = Union[FusedVector, Sequence[float], np.ndarray]
LabeledSample = Tuple[Union[GradeLabel, int], VectorLike]


# ============================================================================
# Exceptions
# ============================================================================

class ClassifierError(PipelineError):
    """Base class for training and grading errors"""
    pass


class MissingClassError(ClassifierError):
    """A required grade has no training vectors"""
    pass


class UnexpectedClassError(ClassifierError):
    """A training label is outside the requested class set"""
    pass


class KTooLargeError(ClassifierError):
    """k exceeds the number of training vectors"""
    pass


class SingularCovarianceError(ClassifierError):
    """Pooled covariance is not symmetric positive definite"""
    pass


class UnfittedModelError(ClassifierError):
    """Model holds no trained parameters"""
    pass


class UnknownClassifierError(ConfigError):
    """Classifier kind is not knn, centroid or lda"""
    pass


# ============================================================================
# Model
# ============================================================================

@dataclass(frozen=True, eq=False)
class TrainedModel:
    """
    Immutable trained grader

    Stored vectors/centroids/means live in the normalized space when
    `normalize` is set; `stats` then holds the training-set statistics.

    Attributes:
        kind: "knn", "centroid" or "lda"
        k: Neighbour count (knn; kept for the header otherwise)
        classes: Grades the model can output, ascending
        normalize: Queries are z-scored with `stats`
        stats: Training-set normalization statistics
        vectors, labels: Training set (knn)
        centroids: One row per class (centroid)
        means, cov_inv, priors: Class means, pooled covariance inverse, priors (lda)
    """

    kind: str
    k: int = DEFAULT_K
    classes: Tuple[GradeLabel, ...] = ALL_GRADES
    normalize: bool = DEFAULT_NORMALIZE
    stats: Optional[NormalizationStats] = None
    vectors: Optional[np.ndarray] = None
    labels: Optional[np.ndarray] = None
    centroids: Optional[np.ndarray] = None
    means: Optional[np.ndarray] = None
    cov_inv: Optional[np.ndarray] = None
    priors: Optional[np.ndarray] = None

    @property
    def is_fitted(self) -> bool:
        if self.normalize and self.stats is None:
            return False
        if self.kind == "knn":
            return self.vectors is not None and self.labels is not None and len(self.labels) >= self.k
        if self.kind == "centroid":
            return self.centroids is not None and len(self.centroids) == len(self.classes)
        if self.kind == "lda":
            return self.means is not None and self.cov_inv is not None and self.priors is not None
        return False

    @property
    def dims(self) -> int:
        for array in (self.vectors, self.centroids, self.means):
            if array is not None:
                return array.shape[1]
        return 0

    def __repr__(self):
        return (
            f"TrainedModel(kind={self.kind}, k={self.k}, classes={len(self.classes)}, "
            f"normalize={self.normalize}, dims={self.dims})"
        )


# ============================================================================
# Training
# ============================================================================

def _raw_values(vector: VectorLike) -> np.ndarray:
    if isinstance(vector, FusedVector):
        if vector.normalized:
            raise NormalizationMismatchError("Training vectors must be raw (unnormalized)")
        return vector.values
    return np.asarray(vector, dtype=np.float64).ravel()


def _canonical_samples(samples: Iterable[LabeledSample]) -> Tuple[np.ndarray, np.ndarray]:
    """Stack samples sorted by (label, values) so training ignores insertion order"""
    samples = list(samples)
    if not samples:
        raise MissingClassError("Training set is empty")

    labels = np.array([int(GradeLabel(int(label))) for label, _ in samples], dtype=np.int64)
    rows = [_raw_values(vector) for _, vector in samples]

    if len({row.size for row in rows}) > 1:
        raise LengthMismatchError("Training vectors differ in length")

    matrix = np.vstack(rows)
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteInputError("Training set contains non-finite features")

    order = np.lexsort(tuple(matrix[:, d] for d in range(matrix.shape[1] - 1, -1, -1)) + (labels,))
    return matrix[order], labels[order]


def _pooled_covariance(matrix: np.ndarray, labels: np.ndarray, classes: Sequence[GradeLabel]):
    means = []
    scatter = np.zeros((matrix.shape[1], matrix.shape[1]))
    for grade in classes:
        members = matrix[labels == int(grade)]
        if members.shape[0] < 2:
            raise SingularCovarianceError(
                f"LDA needs more than one vector per class; {grade} has {members.shape[0]}"
            )
        mean = members.mean(axis=0)
        centered = members - mean
        scatter += centered.T @ centered
        means.append(mean)

    dof = matrix.shape[0] - len(classes)
    covariance = scatter / dof
    return np.vstack(means), 0.5 * (covariance + covariance.T)


def _invert_spd(covariance: np.ndarray) -> np.ndarray:
    eigenvalues = np.linalg.eigvalsh(covariance)
    largest = eigenvalues.max()
    if largest <= 0 or eigenvalues.min() <= SINGULAR_COVARIANCE_TOLERANCE * largest:
        raise SingularCovarianceError(
            f"Pooled covariance is singular (eigenvalues {eigenvalues.min():.3g} .. {largest:.3g})"
        )
    try:
        factor = linalg.cho_factor(covariance)
    except linalg.LinAlgError as e:
        raise SingularCovarianceError(f"Pooled covariance is not positive definite: {e}") from e
    inverse = linalg.cho_solve(factor, np.eye(covariance.shape[0]))
    return 0.5 * (inverse + inverse.T)


def train(
    kind: str,
    samples: Iterable[LabeledSample],
    k: int = DEFAULT_K,
    normalize: bool = DEFAULT_NORMALIZE,
    classes: Optional[Sequence[Union[GradeLabel, int]]] = None,
) -> TrainedModel:
    """
    Train a grader on labeled raw vectors

    Args:
        kind: "knn", "centroid" or "lda"
        samples: (label, vector) pairs; vectors are FusedVectors or plain arrays
        k: Neighbour count for knn
        normalize: z-score features with training-set statistics
        classes: Grades that must be present (default: all six)

    Returns:
        TrainedModel

    Raises:
        MissingClassError: A required grade has no vectors
        KTooLargeError: knn with k above the training-set size
        SingularCovarianceError: lda with a degenerate pooled covariance
        ZeroVarianceFeatureError: normalize with a constant feature

    Example:
        model = train("knn", [(grade, fused) for grade, fused in training_set], k=4)
    """
    require(validate_choice(kind, CLASSIFIER_KINDS, "classifier"), UnknownClassifierError)
    require(validate_positive_int(k, "k"), ConfigError)

    matrix, labels = _canonical_samples(samples)

    classes = tuple(sorted(GradeLabel(int(c)) for c in (ALL_GRADES if classes is None else classes)))
    present = set(labels.tolist())
    missing = [str(c) for c in classes if int(c) not in present]
    if missing:
        raise MissingClassError(get_error_message("missing_class", grades=", ".join(missing)))
    unexpected = sorted(present - {int(c) for c in classes})
    if unexpected:
        raise UnexpectedClassError(f"Training labels outside the class set: {unexpected}")

    stats = None
    if normalize:
        stats = compute_stats([FusedVector(row) for row in matrix])
        matrix = (matrix - stats.mean) / stats.std

    common = dict(kind=kind, k=k, classes=classes, normalize=normalize, stats=stats)

    if kind == "knn":
        if k > matrix.shape[0]:
            raise KTooLargeError(get_error_message("k_too_large", k=k, n=matrix.shape[0]))
        model = TrainedModel(vectors=matrix, labels=labels, **common)

    elif kind == "centroid":
        centroids = np.vstack([matrix[labels == int(c)].mean(axis=0) for c in classes])
        model = TrainedModel(centroids=centroids, **common)

    else:
        means, covariance = _pooled_covariance(matrix, labels, classes)
        model = TrainedModel(
            means=means,
            cov_inv=_invert_spd(covariance),
            priors=np.full(len(classes), 1.0 / len(classes)),
            **common,
        )

    logger.debug(f"Trained {model!r} on {matrix.shape[0]} vectors")
    return model


# ============================================================================
# Grading
# ============================================================================

def prepare_query(model: TrainedModel, query: VectorLike) -> np.ndarray:
    """
    Bring a query into the model's feature space

    Raw queries are z-scored with the model's statistics; normalized
    queries are accepted as-is by normalizing models only.
    """
    if isinstance(query, FusedVector):
        values, normalized = query.values, query.normalized
    else:
        values, normalized = np.asarray(query, dtype=np.float64).ravel(), False

    if values.size != model.dims:
        raise LengthMismatchError(f"Query has {values.size} features, model expects {model.dims}")
    if not np.all(np.isfinite(values)):
        raise NonFiniteInputError(f"Non-finite query {values.tolist()}")

    if model.normalize:
        return values if normalized else (values - model.stats.mean) / model.stats.std
    if normalized:
        raise NormalizationMismatchError("Normalized query given to a model trained without normalization")
    return values


def _grade_knn(model: TrainedModel, x: np.ndarray) -> Tuple[GradeLabel, float]:
    distances = np.sqrt(np.sum((model.vectors - x) ** 2, axis=1))
    order = np.lexsort((model.labels, distances))[:model.k]
    nearest = model.labels[order]

    votes = np.bincount(nearest, minlength=len(ALL_GRADES))
    best = votes.max()
    tied = set(np.flatnonzero(votes == best).tolist())

    # nearest neighbour among the tied classes; distance ties resolved by lower label
    winner = next(int(label) for label in nearest if int(label) in tied)
    return GradeLabel(winner), float(best) / model.k


def _grade_centroid(model: TrainedModel, x: np.ndarray) -> Tuple[GradeLabel, float]:
    distances = np.sqrt(np.sum((model.centroids - x) ** 2, axis=1))
    index = int(np.argmin(distances))
    return model.classes[index], -float(distances[index])


def _grade_lda(model: TrainedModel, x: np.ndarray) -> Tuple[GradeLabel, float]:
    projected = model.means @ model.cov_inv
    scores = projected @ x - 0.5 * np.sum(projected * model.means, axis=1) + np.log(model.priors)
    index = int(np.argmax(scores))
    return model.classes[index], float(scores[index])


_GRADERS = {
    "knn": _grade_knn,
    "centroid": _grade_centroid,
    "lda": _grade_lda,
}


def grade(model: TrainedModel, query: VectorLike) -> Tuple[GradeLabel, float]:
    """
    Grade one query

    Returns:
        (GradeLabel, score): vote fraction (knn), negative distance
        (centroid) or discriminant value (lda)

    Raises:
        UnfittedModelError: Model has no trained parameters
    """
    if model is None or not model.is_fitted:
        raise UnfittedModelError("Model has not been trained")
    return _GRADERS[model.kind](model, prepare_query(model, query))


def grade_many(model: TrainedModel, queries: Iterable[VectorLike]) -> List[Tuple[GradeLabel, float]]:
    return [grade(model, query) for query in queries]


__all__ = [
    'ClassifierError',
    'MissingClassError',
    'UnexpectedClassError',
    'KTooLargeError',
    'SingularCovarianceError',
    'UnfittedModelError',
    'UnknownClassifierError',
    'TrainedModel',
    'train',
    'prepare_query',
    'grade',
    'grade_many',
]
