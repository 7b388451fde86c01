"""
harness/report.py
Evaluation reports: confusion matrix, per-grade TPR/FPR, average accuracy,
classifier x feature-mode comparison, k sweep, JSON serialization
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

from config.settings import DEFAULT_CLASSIFIER, DEFAULT_K, REPORT_DECIMALS, SVM_NOTE
from grading.labels import ALL_GRADES, GRADE_NAMES, GradeLabel
from utils.errors import PipelineError
from utils.file_utils import write_text_file
from utils.logger import get_logger

logger = get_logger(__name__)


class ReportError(PipelineError):
    """Confusion matrix is malformed or the report cannot be written"""
    pass


def _round(value: Optional[float]) -> Optional[float]:
    return None if value is None else round(float(value), REPORT_DECIMALS)


def confusion_matrix(true_labels: Iterable[GradeLabel], predicted: Iterable[GradeLabel]) -> np.ndarray:
    """
    6x6 counts, rows = true grade, columns = predicted grade

    Example:
        confusion_matrix([GradeLabel.SOFT_SMALL], [GradeLabel.SOFT_LARGE])[0, 1]  # 1
    """
    true_labels, predicted = list(true_labels), list(predicted)
    if len(true_labels) != len(predicted):
        raise ReportError(f"{len(true_labels)} true labels but {len(predicted)} predictions")

    matrix = np.zeros((len(ALL_GRADES), len(ALL_GRADES)), dtype=np.int64)
    for truth, guess in zip(true_labels, predicted):
        matrix[int(truth), int(guess)] += 1
    return matrix


@dataclass
class GradeRates:
    """Per-grade TPR/FPR counts and percentages"""

    grade: GradeLabel
    test_count: int
    tpr_count: int
    fpr_count: int

    @property
    def tpr_percent(self) -> Optional[float]:
        if self.test_count == 0:
            return None
        return 100.0 * self.tpr_count / self.test_count

    @property
    def fpr_percent(self) -> Optional[float]:
        if self.test_count == 0:
            return None
        return 100.0 * self.fpr_count / self.test_count


@dataclass
class EvaluationReport:
    """
    Outcome of one evaluation

    `comparison` and `k_sweep` are filled by the evaluator; a report built
    from a bare confusion matrix leaves them empty.
    """

    confusion: np.ndarray
    rates: Sequence[GradeRates]
    classifier: str = DEFAULT_CLASSIFIER
    k: int = DEFAULT_K
    seed: Optional[int] = None
    dataset: Optional[str] = None
    feature_mode: str = "fused"
    comparison: Dict[str, Dict[str, Dict[str, Any]]] = field(default_factory=dict)
    k_sweep: Dict[int, float] = field(default_factory=dict)

    def _scored(self):
        return [r for r in self.rates if r.test_count > 0]

    @property
    def per_grade_accuracy(self) -> Dict[GradeLabel, Optional[float]]:
        return {r.grade: r.tpr_percent for r in self.rates}

    @property
    def average_accuracy(self) -> float:
        """Mean of per-grade TPR% over grades with test samples"""
        scored = self._scored()
        return float(np.mean([r.tpr_percent for r in scored])) if scored else 0.0

    @property
    def average_fpr(self) -> float:
        scored = self._scored()
        return float(np.mean([r.fpr_percent for r in scored])) if scored else 0.0

    @property
    def average_tpr_count(self) -> float:
        scored = self._scored()
        return float(np.mean([r.tpr_count for r in scored])) if scored else 0.0

    @property
    def average_fpr_count(self) -> float:
        scored = self._scored()
        return float(np.mean([r.fpr_count for r in scored])) if scored else 0.0

    @property
    def test_count(self) -> int:
        return int(self.confusion.sum())

    def _rate_block(self, kind: str) -> Dict[str, Any]:
        block = {}
        for r in self.rates:
            count = r.tpr_count if kind == "tpr" else r.fpr_count
            percent = r.tpr_percent if kind == "tpr" else r.fpr_percent
            block[str(r.grade)] = {"count": count, "percent": _round(percent)}
        if kind == "tpr":
            block["average"] = {"count": _round(self.average_tpr_count), "percent": _round(self.average_accuracy)}
        else:
            block["average"] = {"count": _round(self.average_fpr_count), "percent": _round(self.average_fpr)}
        return block

    def to_dict(self) -> Dict[str, Any]:
        """Fixed key order; percentages rounded to REPORT_DECIMALS"""
        return {
            "classifier": self.classifier,
            "k": self.k,
            "seed": self.seed,
            "dataset": self.dataset,
            "feature_mode": self.feature_mode,
            "confusion": {
                "grades": list(GRADE_NAMES),
                "matrix": self.confusion.tolist(),
            },
            "per_grade": {
                str(r.grade): {"test_count": r.test_count, "accuracy": _round(r.tpr_percent)}
                for r in self.rates
            },
            "tpr": self._rate_block("tpr"),
            "fpr": self._rate_block("fpr"),
            "average_accuracy": _round(self.average_accuracy),
            "comparison": self.comparison,
            "svm": SVM_NOTE,
            "k_sweep": {str(k): _round(acc) for k, acc in sorted(self.k_sweep.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def __repr__(self):
        return (
            f"EvaluationReport(classifier={self.classifier}, mode={self.feature_mode}, "
            f"tests={self.test_count}, average={self.average_accuracy:.2f}%)"
        )


def build_report(confusion, **metadata) -> EvaluationReport:
    """
    Derive per-grade TPR/FPR and the average accuracy from a confusion matrix

    Args:
        confusion: 6x6 non-negative integer matrix, rows = true grade
        **metadata: classifier, k, seed, dataset, feature_mode

    Raises:
        ReportError: Wrong shape or negative counts

    Example:
        report = build_report(table, classifier="knn", k=4)
        report.average_accuracy  # 96.4583 for the published matrix
    """
    matrix = np.asarray(confusion)
    if matrix.shape != (len(ALL_GRADES), len(ALL_GRADES)):
        raise ReportError(f"Confusion matrix must be 6x6, got {matrix.shape}")
    if not np.all(matrix == np.round(matrix)) or np.any(matrix < 0):
        raise ReportError("Confusion matrix must hold non-negative integers")
    matrix = matrix.astype(np.int64)

    rates = []
    for grade in ALL_GRADES:
        row = matrix[int(grade)]
        total = int(row.sum())
        correct = int(row[int(grade)])
        if total == 0:
            logger.warning(f"Grade {grade} has no test samples; excluded from averages")
        rates.append(GradeRates(grade=grade, test_count=total, tpr_count=correct, fpr_count=total - correct))

    return EvaluationReport(confusion=matrix, rates=rates, **metadata)


def save_report(report: EvaluationReport, path) -> None:
    """
    Write the report JSON

    Raises:
        ReportError: The file could not be written
    """
    if not write_text_file(Path(path), report.to_json()):
        raise ReportError(f"Failed to write report: {path}")
    logger.info(f"Report written to {path}")


__all__ = [
    'ReportError',
    'confusion_matrix',
    'GradeRates',
    'EvaluationReport',
    'build_report',
    'save_report',
]
