"""
grading/__init__.py
Grading package initialization
"""

from grading.labels import GradeLabel, ALL_GRADES, GRADE_NAMES, UnknownGradeError
from grading.fusion import FusedVector, NormalizationStats, fuse, normalize, euclidean
from grading.classifiers import TrainedModel, train, grade, grade_many
from grading.model_store import save_model, load_model

__all__ = [
    # Labels
    'GradeLabel',
    'ALL_GRADES',
    'GRADE_NAMES',
    'UnknownGradeError',
    # Fusion
    'FusedVector',
    'NormalizationStats',
    'fuse',
    'normalize',
    'euclidean',
    # Classifiers
    'TrainedModel',
    'train',
    'grade',
    'grade_many',
    'save_model',
    'load_model',
]
