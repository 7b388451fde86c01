"""
imaging/__init__.py
Imaging package initialization
"""

from imaging.raster import (
    RasterImage,
    BinaryMask,
    Contour,
    RasterError,
    load_image,
    save_image,
    to_gray,
    from_array,
)
from imaging.specular import BilateralParams, remove_specular, specular_highlight_mask
from imaging.segmentation import otsu_threshold, threshold_segment, fill_holes, segment_fruit
from imaging.contour import sobel_contour

__all__ = [
    # Raster
    'RasterImage',
    'BinaryMask',
    'Contour',
    'RasterError',
    'load_image',
    'save_image',
    'to_gray',
    'from_array',
    # Specular removal
    'BilateralParams',
    'remove_specular',
    'specular_highlight_mask',
    # Segmentation
    'otsu_threshold',
    'threshold_segment',
    'fill_holes',
    'segment_fruit',
    'sobel_contour',
]
