"""
tests/test_splitter.py
Seeded per-grade 50/50 split
"""

from pathlib import Path

import pytest

from grading.labels import ALL_GRADES, GradeLabel
from harness.manifest import Manifest
from harness.splitter import GradeTooSmallError, make_rng, split


def _manifest(per_grade: int) -> Manifest:
    return Manifest([
        (Path(f"/data/{grade}_{index:03d}.ppm"), grade)
        for grade in ALL_GRADES
        for index in range(per_grade)
    ])


def test_balanced_halves():
    train_set, test_set = split(_manifest(160), seed=3)

    for grade in ALL_GRADES:
        assert train_set.counts()[grade] == 80
        assert test_set.counts()[grade] == 80
    assert not set(train_set.paths) & set(test_set.paths)


def test_odd_count_extra_goes_to_test():
    train_set, test_set = split(_manifest(5), seed=1)
    assert train_set.counts()[GradeLabel.HARD_SMALL] == 2
    assert test_set.counts()[GradeLabel.HARD_SMALL] == 3


def test_same_seed_same_split():
    manifest = _manifest(20)

    first = split(manifest, seed=42)
    second = split(manifest, seed=42)

    assert first[0].paths == second[0].paths
    assert first[1].paths == second[1].paths


def test_entry_order_does_not_matter():
    manifest = _manifest(12)
    shuffled = Manifest([(entry.path, entry.label) for entry in reversed(manifest.entries)])

    assert split(manifest, seed=9)[0].paths == split(shuffled, seed=9)[0].paths


def test_different_seeds_differ():
    manifest = _manifest(40)
    assert split(manifest, seed=1)[0].paths != split(manifest, seed=2)[0].paths


def test_grade_with_one_sample():
    entries = [(entry.path, entry.label) for entry in _manifest(4)
               if entry.label != GradeLabel.SOFT_LARGE or entry.path.name.endswith("000.ppm")]
    with pytest.raises(GradeTooSmallError):
        split(Manifest(entries), seed=0)


def test_rng_is_reproducible():
    assert make_rng(5).integers(0, 1 << 30, size=4).tolist() == make_rng(5).integers(0, 1 << 30, size=4).tolist()
