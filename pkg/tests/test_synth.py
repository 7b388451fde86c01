"""
tests/test_synth.py
Synthetic dataset generator
"""

import numpy as np
import pytest
from scipy import ndimage

from config.settings import SYNTH_HEIGHT, SYNTH_WIDTH
from features.lbp import lbp_map
from grading.labels import ALL_GRADES, GradeLabel
from harness.manifest import Manifest, load_manifest
from harness.synth import generate_image, image_rng, is_synthetic_manifest, synth_dataset
from imaging.raster import load_image, to_gray
from imaging.specular import remove_specular
from utils.errors import ConfigError


def _fruit_pixels(rgb: np.ndarray) -> np.ndarray:
    """Chromatic pixels; the background is neutral gray"""
    rgb = rgb.astype(np.int64)
    return rgb[:, :, 0] > rgb[:, :, 2] + 4


def _non_uniform_inside(path) -> float:
    image = load_image(path)
    fruit = ndimage.binary_erosion(_fruit_pixels(image.data), iterations=3)
    codes = lbp_map(to_gray(image), mode="riu2").codes
    inside = fruit[1:-1, 1:-1]
    return float(np.mean(codes[inside] == 9))


def test_dataset_layout(small_dataset):
    manifest = load_manifest(small_dataset.manifest_path)

    assert len(manifest) == 24
    assert all(count == 4 for count in manifest.counts().values())
    assert all(path.is_file() for path in manifest.paths)
    assert manifest.paths[0].name == "Soft_Small_000.ppm"
    for image_path, mask_path in small_dataset.highlight_masks.items():
        assert mask_path.name == image_path.stem + "_highlight.pgm"
        assert load_image(mask_path).is_gray


def test_ten_per_grade(tmp_path):
    result = synth_dataset(10, seed=1, out_dir=tmp_path)
    assert len(result.manifest) == 60
    assert result.manifest.counts()[GradeLabel.HARD_LARGE] == 10


def test_same_seed_gives_identical_bytes(tmp_path):
    first = synth_dataset(2, seed=3, out_dir=tmp_path / "a")
    second = synth_dataset(2, seed=3, out_dir=tmp_path / "b")

    for a, b in zip(first.manifest.paths, second.manifest.paths):
        assert a.read_bytes() == b.read_bytes()
    assert first.manifest_path.read_bytes() == second.manifest_path.read_bytes()


def test_too_few_per_grade(tmp_path):
    with pytest.raises(ConfigError):
        synth_dataset(1, seed=0, out_dir=tmp_path)


def test_generated_image():
    image, _ = generate_image(GradeLabel.SEMI_HARD_LARGE, image_rng(7, GradeLabel.SEMI_HARD_LARGE, 0))
    rgb = image.data

    assert rgb.dtype == np.uint8
    assert rgb.shape == (SYNTH_HEIGHT, SYNTH_WIDTH, 3)
    corner = rgb[:5, :5]
    assert np.all(corner[:, :, 0] == corner[:, :, 1])
    assert np.all((corner >= 240) & (corner <= 250))


def test_large_dates_are_bigger():
    def fruit_area(grade):
        return np.mean([
            _fruit_pixels(generate_image(grade, image_rng(5, grade, i))[0].data).sum() for i in range(3)
        ])

    assert fruit_area(GradeLabel.SOFT_LARGE) > 1.5 * fruit_area(GradeLabel.SOFT_SMALL)


def test_hard_skin_has_more_non_uniform_patterns(small_dataset):
    groups = small_dataset.manifest.by_grade()
    soft = [_non_uniform_inside(p) for g in (GradeLabel.SOFT_SMALL, GradeLabel.SOFT_LARGE) for p in groups[g]]
    hard = [_non_uniform_inside(p) for g in (GradeLabel.HARD_SMALL, GradeLabel.HARD_LARGE) for p in groups[g]]

    assert np.mean(hard) > np.mean(soft)


def test_specular_removal_on_generated_highlights(small_dataset):
    assert small_dataset.highlight_masks

    drops, drifts = [], []
    for image_path, mask_path in small_dataset.highlight_masks.items():
        image = load_image(image_path)
        blob = load_image(mask_path).plane(0) > 0
        fruit = _fruit_pixels(image.data) & ~blob

        before = image.data.astype(np.float64)
        after = remove_specular(image).data

        drops.append(1.0 - after.max(axis=2)[blob].mean() / before.max(axis=2)[blob].mean())
        drifts.append(np.abs(after - before)[fruit].mean())

    assert np.mean(drops) >= 0.20
    assert np.mean(drifts) < 2.0


def test_every_grade_has_an_independent_stream():
    draws = {grade: image_rng(1, grade, 0).random() for grade in ALL_GRADES}
    assert len(set(draws.values())) == len(ALL_GRADES)


def test_synth_layout_is_recognized(small_dataset):
    manifest = small_dataset.manifest
    first = manifest.paths[0]

    assert is_synthetic_manifest(small_dataset.manifest_path, manifest)
    assert not is_synthetic_manifest(small_dataset.manifest_path.with_name("mine.csv"), manifest)
    assert not is_synthetic_manifest(small_dataset.manifest_path.parent / "sub" / "manifest.csv", manifest)
    assert not is_synthetic_manifest(small_dataset.manifest_path, Manifest([(first, GradeLabel.HARD_LARGE)]))
