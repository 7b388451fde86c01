"""
tests/test_evaluator.py
End-to-end evaluation protocol
"""

from pathlib import Path

import numpy as np
import pytest

from config.settings import CLASSIFIER_KINDS, FEATURE_MODES
from features.extractor import PipelineConfig
from grading.labels import ALL_GRADES
from harness.evaluator import FEATURE_COLUMNS, Evaluator, evaluate
from harness.manifest import Manifest
from harness.report import build_report
from harness.synth import synth_dataset
from utils.errors import ImageProcessingError


def test_perfect_classifier_on_separable_data():
    rng = np.random.Generator(np.random.PCG64(2))
    labels = [grade for grade in ALL_GRADES for _ in range(3)]
    rows = np.vstack([10.0 * int(label) + rng.uniform(0, 1, size=8) for label in labels])
    evaluator = Evaluator()

    confusion = evaluator._run("centroid", "fused", 4, (rows, labels), (rows, labels))

    np.testing.assert_array_equal(confusion, np.diag([3] * 6))
    report = build_report(confusion)
    assert report.average_accuracy == 100.0
    assert report.average_fpr == 0.0


def test_feature_columns():
    assert FEATURE_COLUMNS["shape"] == (0, 1, 2, 3, 4, 5)
    assert FEATURE_COLUMNS["texture"] == (6, 7)
    assert len(FEATURE_COLUMNS["fused"]) == 8


def test_report_on_small_dataset(small_dataset):
    report = evaluate("knn", small_dataset.manifest, seed=7, k=4, dataset="synthetic")

    assert report.confusion.sum(axis=1).tolist() == [2] * 6
    assert report.dataset == "synthetic"
    assert set(report.comparison) == set(CLASSIFIER_KINDS)
    for kind in CLASSIFIER_KINDS:
        assert set(report.comparison[kind]) == set(FEATURE_MODES)
    assert report.comparison["knn"]["fused"]["average_accuracy"] == round(report.average_accuracy, 4)
    assert sorted(report.k_sweep) == [1, 2, 3, 4, 5, 6, 7, 8]
    assert report.k_sweep[4] == report.average_accuracy


def test_report_is_identical_across_thread_counts(small_dataset):
    single = evaluate("knn", small_dataset.manifest, seed=11, config=PipelineConfig(threads=1))
    pooled = evaluate("knn", small_dataset.manifest, seed=11, config=PipelineConfig(threads=3))

    assert single.to_json() == pooled.to_json()


def test_missing_image_names_the_path(tmp_path):
    manifest = Manifest([
        (tmp_path / f"{grade}_{index}.ppm", grade) for grade in ALL_GRADES for index in range(2)
    ])

    with pytest.raises(ImageProcessingError) as info:
        evaluate("knn", manifest, seed=1, k=1)

    assert isinstance(info.value.path, Path)
    assert str(info.value.path) in str(info.value)


@pytest.mark.slow
def test_synthetic_accuracy_and_fusion_gain(tmp_path):
    dataset = synth_dataset(40, seed=7, out_dir=tmp_path)

    report = evaluate("knn", dataset.manifest, seed=7, k=4, dataset="synthetic")

    knn = report.comparison["knn"]
    assert report.average_accuracy >= 90.0
    assert knn["fused"]["average_accuracy"] >= max(
        knn["shape"]["average_accuracy"], knn["texture"]["average_accuracy"]
    ) - 2.0
