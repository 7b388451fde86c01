"""
utils/file_utils.py
File system utilities for GradePipe
"""

import os
from pathlib import Path
from typing import Iterable, Optional, Sequence

from utils.logger import get_logger

logger = get_logger(__name__)


# ============================================================================
# Directories
# ============================================================================

def ensure_directory_exists(directory: Path) -> bool:
    """
    Ensure directory exists, create if it doesn't

    Args:
        directory: Path to directory

    Returns:
        True if directory exists or was created successfully
    """
    try:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Ensured directory exists: {directory}")
        return True
    except OSError as e:
        logger.error(f"Failed to create directory {directory}: {e}")
        return False


def make_relative_path(path: Path, base_path: Path) -> Path:
    """
    Express path relative to base_path, falling back to os.path.relpath

    Example:
        make_relative_path("/data/images/a.ppm", "/data")  # images/a.ppm
    """
    path = Path(path)
    base_path = Path(base_path)
    try:
        return path.relative_to(base_path)
    except ValueError:
        return Path(os.path.relpath(path, base_path))


# ============================================================================
# Reading / Writing
# ============================================================================

def read_text_file(filepath: Path, encoding: str = 'utf-8', errors: str = 'strict') -> Optional[str]:
    """
    Read text file with error handling

    Returns:
        File contents as string, or None if error
    """
    try:
        return Path(filepath).read_text(encoding=encoding, errors=errors)
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Failed to read file {filepath}: {e}")
        return None


def write_text_file(filepath: Path, content: str, encoding: str = 'utf-8') -> bool:
    """
    Write text file with error handling

    Args:
        filepath: Path to file
        content: Content to write
        encoding: Text encoding

    Returns:
        True if successful, False otherwise
    """
    try:
        filepath = Path(filepath)
        if not ensure_directory_exists(filepath.parent):
            return False
        filepath.write_text(content, encoding=encoding)
        logger.debug(f"Wrote text file: {filepath}")
        return True
    except OSError as e:
        logger.error(f"Failed to write file {filepath}: {e}")
        return False


def write_binary_file(filepath: Path, content: bytes) -> bool:
    """
    Write binary file

    Returns:
        True if successful, False otherwise
    """
    try:
        filepath = Path(filepath)
        if not ensure_directory_exists(filepath.parent):
            return False
        filepath.write_bytes(content)
        logger.debug(f"Wrote binary file: {filepath}")
        return True
    except OSError as e:
        logger.error(f"Failed to write binary file {filepath}: {e}")
        return False


def format_csv_rows(rows: Iterable[Sequence], number_format: str = "{:.6g}") -> str:
    """
    Render rows of numbers/strings as CSV text (no header, trailing newline)

    Floats use number_format; everything else is str().
    """
    lines = []
    for row in rows:
        cells = [
            number_format.format(cell) if isinstance(cell, float) else str(cell)
            for cell in row
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + ("\n" if lines else "")


# ============================================================================
# Export
# ============================================================================

__all__ = [
    'ensure_directory_exists',
    'make_relative_path',
    'read_text_file',
    'write_text_file',
    'write_binary_file',
    'format_csv_rows',
]
