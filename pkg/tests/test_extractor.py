"""
tests/test_extractor.py
Per-image feature pipeline and batch extraction
"""

import numpy as np
import pytest

from features.extractor import FeatureExtractor, PipelineConfig
from imaging.raster import RasterImage
from imaging.specular import BilateralParams, InvalidBilateralParamsError
from utils.errors import ConfigError, ImageProcessingError
from utils.parallel import ordered_map, resolve_thread_count


def _gray_date(size: int = 64) -> RasterImage:
    rows, cols = np.mgrid[0:size, 0:size]
    inside = ((rows - 31.5) / 18) ** 2 + ((cols - 31.5) / 26) ** 2 <= 1.0
    return RasterImage(np.where(inside, 70, 240).astype(np.uint8))


def test_gray_input_skips_specular_removal():
    stages = FeatureExtractor().preprocess(_gray_date())

    assert stages.highlight.is_empty
    assert stages.mask.foreground_count > 0
    assert len(stages.contour) > 0


def test_extract_image_fuses_eight_features():
    features = FeatureExtractor().extract_image(_gray_date())

    assert features.fused.values.shape == (8,)
    np.testing.assert_array_equal(features.fused.values[:6], features.shape.to_array())
    np.testing.assert_array_equal(features.fused.values[6:], features.texture.to_array())


def test_extract_many_keeps_order(small_dataset):
    paths = small_dataset.manifest.paths[:6]
    extractor = FeatureExtractor()

    serial = extractor.extract_many(paths, threads=1)
    pooled = extractor.extract_many(paths, threads=3)

    assert serial.images_processed == 6
    assert [f.path for f in pooled.features] == list(paths)
    for a, b in zip(serial.features, pooled.features):
        np.testing.assert_array_equal(a.fused.values, b.fused.values)


def test_missing_file_is_annotated(tmp_path):
    missing = tmp_path / "gone.ppm"
    with pytest.raises(ImageProcessingError) as info:
        FeatureExtractor().extract_file(missing)
    assert info.value.path == missing


def test_invalid_filter_settings():
    with pytest.raises(InvalidBilateralParamsError):
        FeatureExtractor(PipelineConfig(bilateral=BilateralParams(spatial_sigma=4.0, window_radius=3)))


def test_ordered_map_reraises_first_failure():
    def check(value):
        if value % 3 == 0:
            raise ValueError(value)
        return value * 2

    assert ordered_map(check, [1, 2, 4, 5], threads=2) == [2, 4, 8, 10]
    with pytest.raises(ValueError, match="3"):
        ordered_map(check, [1, 3, 5, 6], threads=4)


def test_resolve_thread_count(monkeypatch):
    monkeypatch.delenv("GRADEPIPE_THREADS", raising=False)
    assert resolve_thread_count(2) == 2
    assert resolve_thread_count(0) >= 1
    with pytest.raises(ConfigError):
        resolve_thread_count(-2)
