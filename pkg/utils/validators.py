"""
utils/validators.py
Input validation helpers for GradePipe
"""

import math
from pathlib import Path
from typing import Any, Optional, Tuple

from utils.logger import get_logger

logger = get_logger(__name__)


class ValidationError(Exception):
    """Custom exception for validation errors"""
    pass


# ============================================================================
# Numeric Validation
# ============================================================================

def validate_positive(value: Any, name: str) -> Tuple[bool, Optional[str]]:
    """
    Validate that a parameter is a finite number greater than zero

    Args:
        value: Value to check
        name: Parameter name used in the error message

    Returns:
        Tuple of (is_valid, error_message)
        - (True, None) if valid
        - (False, "error message") if invalid

    Example:
        is_valid, error = validate_positive(params.spatial_sigma, "spatial_sigma")
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False, f"{name} must be a number"

    if not math.isfinite(value):
        return False, f"{name} must be finite"

    if value <= 0:
        return False, f"{name} must be positive (got {value})"

    return True, None


def validate_positive_int(value: Any, name: str) -> Tuple[bool, Optional[str]]:
    """
    Validate that a parameter is an integer greater than zero

    Returns:
        Tuple of (is_valid, error_message)
    """
    if isinstance(value, bool) or not isinstance(value, int):
        return False, f"{name} must be an integer"

    if value < 1:
        return False, f"{name} must be at least 1 (got {value})"

    return True, None


def validate_non_negative_int(value: Any, name: str) -> Tuple[bool, Optional[str]]:
    """Validate an integer that may be zero (e.g. a thread count where 0 means auto)"""
    if isinstance(value, bool) or not isinstance(value, int):
        return False, f"{name} must be an integer"

    if value < 0:
        return False, f"{name} cannot be negative (got {value})"

    return True, None


def validate_choice(value: Any, choices, name: str) -> Tuple[bool, Optional[str]]:
    """
    Validate that a parameter is one of a fixed set of values

    Returns:
        Tuple of (is_valid, error_message)
    """
    if value not in choices:
        return False, f"{name} must be one of {', '.join(map(str, choices))} (got {value!r})"

    return True, None


# ============================================================================
# File Path Validation
# ============================================================================

def validate_file_path(filepath, must_exist: bool = False) -> Tuple[bool, Optional[str]]:
    """
    Validate file path

    Args:
        filepath: File path to validate
        must_exist: If True, file must exist on disk

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not filepath or not str(filepath).strip():
        return False, "File path cannot be empty"

    path = Path(str(filepath).strip())

    if '\0' in str(path):
        return False, "File path contains invalid characters"

    if must_exist:
        if not path.exists():
            return False, f"File does not exist: {path}"

        if not path.is_file():
            return False, f"Path is not a file: {path}"

    return True, None


def require(result: Tuple[bool, Optional[str]], error_class=ValidationError):
    """
    Raise when a validator result is negative

    Args:
        result: (is_valid, error_message) tuple from a validate_* helper
        error_class: Exception type to raise

    Raises:
        error_class: With the validator's message

    Example:
        require(validate_positive(sigma, "spatial_sigma"), ParameterError)
    """
    is_valid, error = result
    if not is_valid:
        logger.debug(f"Validation failed: {error}")
        raise error_class(error)


__all__ = [
    'ValidationError',
    'validate_positive',
    'validate_positive_int',
    'validate_non_negative_int',
    'validate_choice',
    'validate_file_path',
    'require',
]
