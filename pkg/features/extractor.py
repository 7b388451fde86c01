"""
features/extractor.py
Feature extractor orchestrator - coordinates specular removal, segmentation,
contour tracing, shape and texture features, and fusion
"""

from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from config.settings import DEFAULT_NORMALIZE
from features.shape import ShapeVector, shape_vector
from features.texture import TextureConfig, TextureVector, texture_vector
from grading.fusion import FusedVector, fuse
from imaging.contour import sobel_contour
from imaging.raster import BinaryMask, Contour, RasterImage, load_image, to_gray
from imaging.segmentation import segment_fruit
from imaging.specular import BilateralParams, remove_specular_with_mask
from utils.errors import ConfigError, ImageProcessingError, PipelineError
from utils.logger import get_logger
from utils.parallel import ordered_map

import numpy as np

logger = get_logger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything the per-image pipeline needs"""

    bilateral: BilateralParams = field(default_factory=BilateralParams)
    texture: TextureConfig = field(default_factory=TextureConfig)
    normalize: bool = DEFAULT_NORMALIZE
    threads: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bilateral": self.bilateral.to_dict(),
            "texture": self.texture.to_dict(),
            "normalize": self.normalize,
            "threads": self.threads,
        }


@dataclass(frozen=True, eq=False)
class PreprocessResult:
    """Intermediate products of the preprocessing stage"""

    diffuse: RasterImage
    highlight: BinaryMask
    gray: RasterImage
    mask: BinaryMask
    contour: Contour
    gradient: np.ndarray


@dataclass(frozen=True, eq=False)
class ImageFeatures:
    """Shape, texture and fused features of one image"""

    shape: ShapeVector
    texture: TextureVector
    fused: FusedVector
    path: Optional[Path] = None


class ExtractionResult:
    """Result of a batch extraction"""

    def __init__(self):
        self.features: List[ImageFeatures] = []
        self.images_processed = 0
        self.errors = []
        self.start_time = datetime.now()
        self.end_time = None

    def mark_complete(self):
        """Mark extraction as complete"""
        self.end_time = datetime.now()

    def get_duration(self) -> float:
        """Get duration in seconds"""
        end = self.end_time or datetime.now()
        return (end - self.start_time).total_seconds()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'images_processed': self.images_processed,
            'duration_seconds': self.get_duration(),
            'errors': self.errors,
        }

    def __repr__(self):
        return f"ExtractionResult(processed={self.images_processed}, errors={len(self.errors)})"


class FeatureExtractor:
    """
    Per-image pipeline: remove_specular -> to_gray -> segment_fruit ->
    sobel_contour -> shape_vector + texture_vector -> fuse
    """

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        self.config.bilateral.validate()
        logger.debug(f"FeatureExtractor initialized ({self.config.to_dict()})")

    # ========================================================================
    # Stages
    # ========================================================================

    def preprocess(self, image: RasterImage) -> PreprocessResult:
        """Specular removal, gray conversion, segmentation and contour"""
        if image.channels == 3:
            diffuse, highlight = remove_specular_with_mask(image, self.config.bilateral)
            gray = to_gray(diffuse)
        else:
            logger.debug("Gray input; skipping specular removal")
            diffuse = image
            highlight = BinaryMask(np.zeros((image.height, image.width), dtype=bool))
            gray = RasterImage(image.to_array())

        mask = segment_fruit(gray)
        contour, gradient = sobel_contour(mask)
        return PreprocessResult(
            diffuse=diffuse,
            highlight=highlight,
            gray=gray,
            mask=mask,
            contour=contour,
            gradient=gradient,
        )

    def extract_image(self, image: RasterImage, path: Optional[Path] = None) -> ImageFeatures:
        stages = self.preprocess(image)
        shape = shape_vector(stages.mask)
        texture = texture_vector(stages.gray, stages.mask, self.config.texture)
        return ImageFeatures(shape=shape, texture=texture, fused=fuse(shape, texture), path=path)

    # ========================================================================
    # Public API - Files
    # ========================================================================

    def extract_file(self, path) -> ImageFeatures:
        """
        Load and process one image file

        Raises:
            ImageProcessingError: Any pipeline error, annotated with the path
        """
        path = Path(path)
        try:
            return self.extract_image(load_image(path), path)
        except (ImageProcessingError, ConfigError):
            raise
        except PipelineError as e:
            logger.error(f"Feature extraction failed for {path}: {e}")
            raise ImageProcessingError(path, e) from e

    def extract_many(self, paths: Sequence, threads: Optional[int] = None) -> ExtractionResult:
        """
        Process many files; results keep the input order

        Raises:
            ImageProcessingError: First failing image in input order
        """
        threads = self.config.threads if threads is None else threads
        result = ExtractionResult()

        try:
            result.features = ordered_map(self.extract_file, list(paths), threads)
            result.images_processed = len(result.features)
        except ImageProcessingError as e:
            result.errors.append(str(e))
            raise
        finally:
            result.mark_complete()

        logger.info(f"Extracted features from {result.images_processed} image(s) in {result.get_duration():.2f}s")
        return result


__all__ = [
    'PipelineConfig',
    'PreprocessResult',
    'ImageFeatures',
    'ExtractionResult',
    'FeatureExtractor',
]
