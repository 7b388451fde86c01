"""
utils/__init__.py
Utilities package initialization
"""

from utils.logger import get_logger, setup_logger, LogExecutionTime
from utils.errors import PipelineError, ConfigError, ImageProcessingError
from utils.validators import (
    ValidationError,
    validate_positive,
    validate_positive_int,
    validate_choice,
    validate_file_path,
    require,
)
from utils.file_utils import (
    ensure_directory_exists,
    read_text_file,
    write_text_file,
    write_binary_file,
)

__all__ = [
    # Logger
    'get_logger',
    'setup_logger',
    'LogExecutionTime',
    # Errors
    'PipelineError',
    'ConfigError',
    'ImageProcessingError',
    # Validators
    'ValidationError',
    'validate_positive',
    'validate_positive_int',
    'validate_choice',
    'validate_file_path',
    'require',
    # File utils
    'ensure_directory_exists',
    'read_text_file',
    'write_text_file',
    'write_binary_file',
]
