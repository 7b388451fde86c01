"""
features/__init__.py
Features package initialization

The extractor is imported from features.extractor directly; it depends on
the grading package, which itself imports the feature vectors below.
"""

from features.shape import ShapeVector, shape_vector, equidiameter
from features.lbp import LbpMap, lbp_map, lbp_histogram
from features.fourier import fft2, ifft2
from features.curvelet import CurveletCoeffs, fdct_wrapping, ifdct_wrapping
from features.texture import TextureConfig, TextureVector, texture_vector

__all__ = [
    'ShapeVector',
    'shape_vector',
    'equidiameter',
    'LbpMap',
    'lbp_map',
    'lbp_histogram',
    'fft2',
    'ifft2',
    'CurveletCoeffs',
    'fdct_wrapping',
    'ifdct_wrapping',
    'TextureConfig',
    'TextureVector',
    'texture_vector',
]
