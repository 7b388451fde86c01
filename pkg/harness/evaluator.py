"""
harness/evaluator.py
Split, extract, train, grade and report; also the classifier x feature-mode
comparison and the k sweep
"""

from typing import Dict, List, Optional, Tuple

import numpy as np

from config.settings import (
    CLASSIFIER_KINDS,
    DEFAULT_K,
    FEATURE_MODES,
    K_SWEEP_VALUES,
    REPORT_DECIMALS,
    SHAPE_FEATURE_NAMES,
    TEXTURE_FEATURE_NAMES,
)
from features.extractor import FeatureExtractor, PipelineConfig
from grading.classifiers import TrainedModel, grade, train
from grading.labels import GradeLabel
from harness.manifest import Manifest
from harness.report import EvaluationReport, build_report, confusion_matrix
from harness.splitter import split
from utils.errors import PipelineError
from utils.logger import LogExecutionTime, get_logger

logger = get_logger(__name__)

_N_SHAPE = len(SHAPE_FEATURE_NAMES)
_N_FUSED = _N_SHAPE + len(TEXTURE_FEATURE_NAMES)

# Fused-vector columns per feature mode
FEATURE_COLUMNS = {
    "shape": tuple(range(_N_SHAPE)),
    "texture": tuple(range(_N_SHAPE, _N_FUSED)),
    "fused": tuple(range(_N_FUSED)),
}

LabeledMatrix = Tuple[np.ndarray, List[GradeLabel]]


class Evaluator:
    """
    Runs the balanced 50/50 protocol on a manifest

    Every image is processed once; ablations select feature columns of the
    same fused vectors.
    """

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        self.extractor = FeatureExtractor(self.config)

    # ========================================================================
    # Steps
    # ========================================================================

    def _features(self, train_set: Manifest, test_set: Manifest) -> Tuple[LabeledMatrix, LabeledMatrix]:
        paths = train_set.paths + test_set.paths
        with LogExecutionTime(logger, f"feature extraction ({len(paths)} images)"):
            result = self.extractor.extract_many(paths)

        matrix = np.vstack([f.fused.values for f in result.features])
        n_train = len(train_set)
        return (matrix[:n_train], train_set.labels), (matrix[n_train:], test_set.labels)

    def _run(
        self,
        kind: str,
        mode: str,
        k: int,
        training: LabeledMatrix,
        testing: LabeledMatrix,
    ) -> np.ndarray:
        """Confusion matrix of one classifier on one feature mode"""
        columns = list(FEATURE_COLUMNS[mode])
        train_rows, train_labels = training
        test_rows, test_labels = testing

        model: TrainedModel = train(
            kind,
            [(label, row[columns]) for label, row in zip(train_labels, train_rows)],
            k=k,
            normalize=self.config.normalize,
        )
        predicted = [grade(model, row[columns])[0] for row in test_rows]
        return confusion_matrix(test_labels, predicted)

    def _comparison(self, k: int, training, testing, known: Dict) -> Dict[str, Dict[str, Dict]]:
        block = {}
        for kind in CLASSIFIER_KINDS:
            block[kind] = {}
            for mode in FEATURE_MODES:
                try:
                    confusion = known.get((kind, mode))
                    if confusion is None:
                        confusion = self._run(kind, mode, k, training, testing)
                except PipelineError as e:
                    logger.warning(f"{kind}/{mode} could not be evaluated: {e}")
                    block[kind][mode] = {"average_accuracy": None, "per_grade": None, "error": str(e)}
                    continue

                report = build_report(confusion)
                block[kind][mode] = {
                    "average_accuracy": round(report.average_accuracy, REPORT_DECIMALS),
                    "per_grade": {
                        str(g): (None if acc is None else round(acc, REPORT_DECIMALS))
                        for g, acc in report.per_grade_accuracy.items()
                    },
                }
        return block

    def _k_sweep(self, training, testing, known: Dict) -> Dict[int, float]:
        sweep = {}
        n_train = len(training[1])
        for k in K_SWEEP_VALUES:
            if k > n_train:
                logger.debug(f"k sweep: skipping k={k} (only {n_train} training vectors)")
                continue
            confusion = known.get(k)
            if confusion is None:
                confusion = self._run("knn", "fused", k, training, testing)
            sweep[k] = build_report(confusion).average_accuracy
        return sweep

    # ========================================================================
    # Public API
    # ========================================================================

    def evaluate(
        self,
        model_kind: str,
        manifest: Manifest,
        seed: int,
        k: int = DEFAULT_K,
        dataset: Optional[str] = None,
    ) -> EvaluationReport:
        """
        Full protocol with the fused features as the headline result

        Raises:
            GradeTooSmallError: A grade cannot be split
            ImageProcessingError: An image failed, naming its path
            ClassifierError / FusionError: The headline classifier cannot train
        """
        with LogExecutionTime(logger, f"evaluation ({model_kind}, seed={seed})"):
            train_set, test_set = split(manifest, seed)
            training, testing = self._features(train_set, test_set)

            headline = self._run(model_kind, "fused", k, training, testing)
            report = build_report(
                headline,
                classifier=model_kind,
                k=k,
                seed=seed,
                dataset=dataset,
                feature_mode="fused",
            )

            known = {(model_kind, "fused"): headline}
            report.comparison = self._comparison(k, training, testing, known)
            report.k_sweep = self._k_sweep(
                training, testing, {k: headline} if model_kind == "knn" else {}
            )

        logger.info(f"{report!r}")
        return report


def evaluate(
    model_kind: str,
    manifest: Manifest,
    seed: int,
    config: Optional[PipelineConfig] = None,
    k: int = DEFAULT_K,
    dataset: Optional[str] = None,
) -> EvaluationReport:
    """
    Example:
        report = evaluate("knn", load_manifest("m.csv"), seed=7, k=4)
    """
    return Evaluator(config).evaluate(model_kind, manifest, seed, k=k, dataset=dataset)


__all__ = ['FEATURE_COLUMNS', 'Evaluator', 'evaluate']
