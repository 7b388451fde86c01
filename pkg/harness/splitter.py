"""
harness/splitter.py
Balanced, seeded 50/50 train/test split per grade
"""

from typing import Tuple

import numpy as np

from grading.labels import ALL_GRADES
from harness.manifest import Manifest, ManifestError
from utils.logger import get_logger

logger = get_logger(__name__)


class GradeTooSmallError(ManifestError):
    """A grade has fewer than two samples"""

    def __init__(self, grade, count: int):
        self.grade = grade
        self.count = count
        super().__init__(f"Grade {grade} has {count} sample(s); at least 2 are needed to split")


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; the same seed gives the same stream on every platform"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def split(manifest: Manifest, seed: int) -> Tuple[Manifest, Manifest]:
    """
    Split every grade in half: floor(n/2) train, the rest test

    Grades are visited in label order; within a grade, paths are sorted
    before the shuffle so entry order in the manifest does not matter.
    Train and test are disjoint.

    Raises:
        GradeTooSmallError: A grade has fewer than 2 samples

    Example:
        train_set, test_set = split(load_manifest("m.csv"), seed=7)
    """
    rng = make_rng(seed)
    groups = manifest.by_grade()

    train_entries, test_entries = [], []
    for grade in ALL_GRADES:
        paths = sorted(groups[grade], key=lambda p: p.as_posix())
        if len(paths) < 2:
            raise GradeTooSmallError(grade, len(paths))

        order = rng.permutation(len(paths))
        n_train = len(paths) // 2
        chosen = set(order[:n_train].tolist())

        for index, path in enumerate(paths):
            (train_entries if index in chosen else test_entries).append((path, grade))

    train_set, test_set = Manifest(train_entries), Manifest(test_entries)
    logger.debug(f"Split seed={seed}: {len(train_set)} train, {len(test_set)} test")
    return train_set, test_set


__all__ = ['GradeTooSmallError', 'make_rng', 'split']
