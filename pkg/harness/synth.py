"""
harness/synth.py
Synthetic date images: brown ellipses on a near-white background, with
size-dependent axes, surface-dependent speckle and optional highlight blobs
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import ndimage

from config.settings import (
    SYNTH_AXIS_JITTER,
    SYNTH_BACKGROUND_LEVEL,
    SYNTH_BACKGROUND_SPREAD,
    SYNTH_BASE_LEVEL_RANGE,
    SYNTH_BROWN_RATIO,
    SYNTH_CENTER_JITTER,
    SYNTH_HEIGHT,
    SYNTH_HIGHLIGHT_FRACTION,
    SYNTH_HIGHLIGHT_MASK_LEVEL,
    SYNTH_HIGHLIGHT_OFFSET,
    SYNTH_HIGHLIGHT_PEAK_RANGE,
    SYNTH_HIGHLIGHT_SIGMA,
    SYNTH_IMAGES_DIR,
    SYNTH_MANIFEST_NAME,
    SYNTH_SEMI_AXES,
    SYNTH_SPECKLE_AMPLITUDE,
    SYNTH_SPECKLE_SMOOTHING,
    SYNTH_WIDTH,
)
from grading.labels import ALL_GRADES, GradeLabel
from harness.manifest import Manifest, save_manifest
from imaging.raster import BinaryMask, RasterError, RasterImage, save_image
from utils.errors import ConfigError, PipelineError
from utils.file_utils import ensure_directory_exists
from utils.logger import LogExecutionTime, get_logger
from utils.validators import require, validate_positive_int

logger = get_logger(__name__)


class SynthError(PipelineError):
    """Synthetic dataset could not be written"""
    pass


@dataclass
class SynthResult:
    """Generated manifest and the ground-truth highlight masks"""

    manifest: Manifest
    manifest_path: Path
    highlight_masks: Dict[Path, Path] = field(default_factory=dict)

    def __repr__(self):
        return (
            f"SynthResult(images={len(self.manifest)}, highlights={len(self.highlight_masks)}, "
            f"manifest={self.manifest_path})"
        )


def image_rng(seed: int, grade: GradeLabel, index: int) -> np.random.Generator:
    """Independent PCG64 stream per (seed, grade, image index)"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, int(grade), index])))


def _ellipse(rng: np.random.Generator, grade: GradeLabel):
    semi_rows, semi_cols = SYNTH_SEMI_AXES[grade.size]
    scale = 1.0 + rng.uniform(-SYNTH_AXIS_JITTER, SYNTH_AXIS_JITTER)
    semi_rows, semi_cols = semi_rows * scale, semi_cols * scale

    jitter = rng.integers(-SYNTH_CENTER_JITTER, SYNTH_CENTER_JITTER + 1, size=2)
    center_row = (SYNTH_HEIGHT - 1) / 2.0 + jitter[0]
    center_col = (SYNTH_WIDTH - 1) / 2.0 + jitter[1]

    rows, cols = np.mgrid[0:SYNTH_HEIGHT, 0:SYNTH_WIDTH]
    inside = ((rows - center_row) / semi_rows) ** 2 + ((cols - center_col) / semi_cols) ** 2 <= 1.0
    return inside, (center_row, center_col), (semi_rows, semi_cols), rows, cols


def _speckle(rng: np.random.Generator) -> np.ndarray:
    """Unit-variance smooth noise field"""
    field_ = ndimage.gaussian_filter(rng.standard_normal((SYNTH_HEIGHT, SYNTH_WIDTH)), SYNTH_SPECKLE_SMOOTHING)
    return field_ / field_.std()


def generate_image(grade: GradeLabel, rng: np.random.Generator) -> Tuple[RasterImage, Optional[BinaryMask]]:
    """
    One synthetic RGB date image

    Returns:
        (image, highlight mask or None when no highlight was added)
    """
    background = rng.integers(
        SYNTH_BACKGROUND_LEVEL - SYNTH_BACKGROUND_SPREAD,
        SYNTH_BACKGROUND_LEVEL + SYNTH_BACKGROUND_SPREAD + 1,
        size=(SYNTH_HEIGHT, SYNTH_WIDTH),
    ).astype(np.float64)

    inside, center, semi, rows, cols = _ellipse(rng, grade)

    base = rng.integers(SYNTH_BASE_LEVEL_RANGE[0], SYNTH_BASE_LEVEL_RANGE[1] + 1)
    amplitude = SYNTH_SPECKLE_AMPLITUDE[grade.surface]
    q = np.maximum(np.floor(base * (1.0 + amplitude * _speckle(rng)) + 0.5), 1.0)

    image = np.repeat(background[:, :, None], 3, axis=2)
    for channel, ratio in enumerate(SYNTH_BROWN_RATIO):
        image[:, :, channel] = np.where(inside, ratio * q, image[:, :, channel])

    highlight = None
    if rng.random() < SYNTH_HIGHLIGHT_FRACTION:
        angle = rng.uniform(0.0, 2.0 * math.pi)
        blob_row = center[0] + SYNTH_HIGHLIGHT_OFFSET * semi[0] * math.sin(angle)
        blob_col = center[1] + SYNTH_HIGHLIGHT_OFFSET * semi[1] * math.cos(angle)
        peak = rng.integers(SYNTH_HIGHLIGHT_PEAK_RANGE[0], SYNTH_HIGHLIGHT_PEAK_RANGE[1] + 1)

        distance2 = (rows - blob_row) ** 2 + (cols - blob_col) ** 2
        added = np.where(inside, peak * np.exp(-distance2 / (2.0 * SYNTH_HIGHLIGHT_SIGMA ** 2)), 0.0)
        image += added[:, :, None]
        highlight = BinaryMask(added >= SYNTH_HIGHLIGHT_MASK_LEVEL)

    pixels = np.floor(np.clip(image, 0.0, 255.0) + 0.5).astype(np.uint8)
    return RasterImage(pixels), highlight


def synth_dataset(n_per_grade: int, seed: int, out_dir) -> SynthResult:
    """
    Write n_per_grade images per grade plus manifest.csv

    Images go to <out_dir>/images/<Grade>_<nnn>.ppm; images with a
    highlight also get <Grade>_<nnn>_highlight.pgm. Output is
    byte-identical for a fixed seed.

    Raises:
        ConfigError: n_per_grade < 2
        SynthError: Output could not be written

    Example:
        result = synth_dataset(10, seed=7, out_dir="data/synth")
        len(result.manifest)  # 60
    """
    require(validate_positive_int(n_per_grade, "n_per_grade"), ConfigError)
    if n_per_grade < 2:
        raise ConfigError(f"n_per_grade must be at least 2 (got {n_per_grade})")

    out_dir = Path(out_dir)
    images_dir = out_dir / SYNTH_IMAGES_DIR
    if not ensure_directory_exists(images_dir):
        raise SynthError(f"Cannot create output directory: {images_dir}")

    entries, masks = [], {}
    with LogExecutionTime(logger, f"synthetic dataset ({n_per_grade} per grade)"):
        for grade in ALL_GRADES:
            for index in range(n_per_grade):
                image, highlight = generate_image(grade, image_rng(seed, grade, index))
                stem = f"{grade}_{index:03d}"
                path = images_dir / f"{stem}.ppm"
                try:
                    save_image(image, path)
                    if highlight is not None:
                        mask_path = images_dir / f"{stem}_highlight.pgm"
                        save_image(highlight.to_image(), mask_path)
                        masks[path] = mask_path
                except RasterError as e:
                    raise SynthError(str(e)) from e
                entries.append((path, grade))

        manifest = Manifest(entries)
        manifest_path = out_dir / SYNTH_MANIFEST_NAME
        try:
            save_manifest(manifest, manifest_path)
        except PipelineError as e:
            raise SynthError(str(e)) from e

    result = SynthResult(manifest=manifest, manifest_path=manifest_path, highlight_masks=masks)
    logger.info(f"Generated {result!r}")
    return result


def is_synthetic_manifest(manifest_path, manifest: Manifest) -> bool:
    """
    True when manifest_path and its entries have the layout synth_dataset
    writes: manifest.csv beside images/<Grade>_<nnn>.ppm
    """
    manifest_path = Path(manifest_path)
    if manifest_path.name != SYNTH_MANIFEST_NAME or len(manifest) == 0:
        return False

    images_dir = (manifest_path.parent / SYNTH_IMAGES_DIR).resolve()
    for entry in manifest.entries:
        path = Path(entry.path)
        prefix = f"{entry.label}_"
        if path.resolve().parent != images_dir or path.suffix != ".ppm":
            return False
        if not path.stem.startswith(prefix) or not path.stem[len(prefix):].isdigit():
            return False
    return True


__all__ = ['SynthError', 'SynthResult', 'image_rng', 'generate_image', 'synth_dataset', 'is_synthetic_manifest']
