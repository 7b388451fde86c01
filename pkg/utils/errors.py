"""
utils/errors.py
Exception roots shared by every pipeline package
"""


class PipelineError(Exception):
    """Base class for data and pipeline errors (CLI exit code 2)"""
    pass


class ConfigError(Exception):
    """Invalid configuration file, flag or parameter combination (CLI exit code 1)"""
    pass


class ImageProcessingError(PipelineError):
    """
    A pipeline stage failed on a specific dataset image

    Attributes:
        path: Offending image path
        cause: Original pipeline error
    """

    def __init__(self, path, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"{path}: {type(cause).__name__}: {cause}")


__all__ = ['PipelineError', 'ConfigError', 'ImageProcessingError']
