"""
imaging/raster.py
Image containers and bit-exact binary PGM/PPM I/O
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from config.settings import (
    GRAY_DECIMALS,
    GRAY_WEIGHTS,
    PGM_MAGIC,
    PPM_MAGIC,
    SUPPORTED_MAXVAL,
    get_error_message,
)
from utils.errors import PipelineError
from utils.file_utils import write_binary_file
from utils.logger import get_logger

logger = get_logger(__name__)


# ============================================================================
# Exceptions
# ============================================================================

class RasterError(PipelineError):
    """Base class for raster container and I/O errors"""
    pass


class ImageNotFoundError(RasterError, FileNotFoundError):
    """Image file does not exist"""
    pass


class MalformedHeaderError(RasterError):
    """PGM/PPM header is missing, unsupported or inconsistent"""
    pass


class TruncatedDataError(RasterError):
    """Payload holds fewer samples than width x height x channels"""
    pass


class WrongChannelCountError(RasterError):
    """Operation received an image with the wrong number of channels"""
    pass


class ImageWriteError(RasterError):
    """Image could not be written to disk"""
    pass


class InvalidRasterError(RasterError):
    """Array does not describe a valid image or mask"""
    pass


# ============================================================================
# Containers
# ============================================================================

def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RasterImage:
    """
    Immutable pixel grid stored as a (height, width, channels) array

    8-bit images (uint8) come from and go to files; every computed image is
    float64. Channels are 1 (gray) or 3 (RGB).
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)

        if data.ndim == 2:
            data = data[:, :, np.newaxis]

        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise InvalidRasterError(f"Expected (h, w, 1|3) samples, got shape {data.shape}")

        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidRasterError(f"Image dimensions must be positive, got {data.shape[:2]}")

        if data.dtype != np.uint8:
            data = data.astype(np.float64)
            if not np.all(np.isfinite(data)):
                raise InvalidRasterError("Real-valued samples must be finite")

        object.__setattr__(self, "data", _frozen(data))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def is_gray(self) -> bool:
        return self.channels == 1

    @property
    def is_8bit(self) -> bool:
        return self.data.dtype == np.uint8

    def plane(self, channel: int = 0) -> np.ndarray:
        """Single channel as a float64 (height, width) array"""
        return self.data[:, :, channel].astype(np.float64)

    def to_array(self) -> np.ndarray:
        """Writable float64 copy of the samples, (h, w) for gray, (h, w, 3) for RGB"""
        array = self.data.astype(np.float64)
        return array[:, :, 0] if self.is_gray else array

    def same_pixels(self, other: "RasterImage") -> bool:
        return (
            self.data.shape == other.data.shape
            and self.data.dtype == other.data.dtype
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self):
        kind = "Gray" if self.is_gray else "RGB"
        return f"RasterImage({kind}, {self.width}x{self.height}, {self.data.dtype})"


def from_array(array) -> RasterImage:
    """Wrap a (h, w) or (h, w, c) array as a RasterImage"""
    return RasterImage(np.asarray(array))


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Foreground (True) / background (False) grid, shape (height, width)"""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.shape[0] < 1 or bits.shape[1] < 1:
            raise InvalidRasterError(f"Mask must be a non-empty 2-D grid, got shape {bits.shape}")
        object.__setattr__(self, "bits", _frozen(bits.astype(bool)))

    @classmethod
    def from_array(cls, array) -> "BinaryMask":
        return cls(np.asarray(array) != 0)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def foreground_count(self) -> int:
        return int(np.count_nonzero(self.bits))

    @property
    def is_empty(self) -> bool:
        return self.foreground_count == 0

    def to_image(self) -> RasterImage:
        """8-bit gray rendering (foreground 255, background 0)"""
        return RasterImage(np.where(self.bits, 255, 0).astype(np.uint8))

    def same_bits(self, other: "BinaryMask") -> bool:
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    def __repr__(self):
        return f"BinaryMask({self.width}x{self.height}, foreground={self.foreground_count})"


@dataclass(frozen=True, eq=False)
class Contour:
    """Ordered (row, col) boundary trace, shape (n, 2)"""

    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "points", _frozen(points))

    def __len__(self) -> int:
        return self.points.shape[0]

    def to_csv(self) -> str:
        """One `row,col` pair per line in trace order"""
        return "".join(f"{r},{c}\n" for r, c in self.points.tolist())

    def __repr__(self):
        return f"Contour(points={len(self)})"


# ============================================================================
# Header Parsing
# ============================================================================

def _parse_header(payload: bytes, path: Path) -> Tuple[str, int, int, int, int]:
    """
    Parse a binary PNM header

    Returns:
        (magic, width, height, maxval, offset of the first pixel byte)
    """
    if len(payload) < 2:
        raise MalformedHeaderError(f"{path}: file too short for a PNM header")

    magic = payload[:2].decode("ascii", errors="replace")
    pos = 2
    tokens = []

    while len(tokens) < 3:
        # whitespace and comments between tokens
        while pos < len(payload):
            byte = payload[pos:pos + 1]
            if byte.isspace():
                pos += 1
            elif byte == b"#":
                newline = payload.find(b"\n", pos)
                pos = len(payload) if newline < 0 else newline + 1
            else:
                break

        start = pos
        while pos < len(payload) and not payload[pos:pos + 1].isspace() and payload[pos:pos + 1] != b"#":
            pos += 1

        token = payload[start:pos]
        if not token:
            raise MalformedHeaderError(f"{path}: header ends before width/height/maxval")
        if not token.isdigit():
            raise MalformedHeaderError(f"{path}: non-numeric header field {token!r}")
        tokens.append(int(token))

    # exactly one whitespace byte separates maxval from the payload
    if pos >= len(payload) or not payload[pos:pos + 1].isspace():
        raise MalformedHeaderError(f"{path}: missing whitespace after maxval")
    pos += 1

    width, height, maxval = tokens
    return magic, width, height, maxval, pos


# ============================================================================
# Readers
# ============================================================================

class BaseImageReader(ABC):
    """Abstract base class for binary PNM readers"""

    @property
    @abstractmethod
    def magic(self) -> str:
        """Two-character magic number"""
        pass

    @property
    @abstractmethod
    def channels(self) -> int:
        """Samples per pixel"""
        pass

    def can_read(self, magic: str) -> bool:
        return magic == self.magic

    def decode(self, payload: bytes, path: Path) -> RasterImage:
        """
        Decode a complete file payload

        Raises:
            MalformedHeaderError: Bad dimensions or maxval
            TruncatedDataError: Too few pixel bytes
        """
        magic, width, height, maxval, offset = _parse_header(payload, path)

        if width < 1 or height < 1:
            raise MalformedHeaderError(f"{path}: dimensions must be positive, got {width}x{height}")

        if maxval != SUPPORTED_MAXVAL:
            raise MalformedHeaderError(f"{path}: " + get_error_message("bad_maxval", maxval=maxval))

        expected = width * height * self.channels
        found = len(payload) - offset
        if found < expected:
            raise TruncatedDataError(
                f"{path}: " + get_error_message("truncated", expected=expected, found=found)
            )
        if found > expected:
            logger.warning(f"{path}: ignoring {found - expected} trailing bytes after pixel data")

        samples = np.frombuffer(payload, dtype=np.uint8, count=expected, offset=offset)
        return RasterImage(samples.reshape(height, width, self.channels))

    def encode(self, samples: np.ndarray) -> bytes:
        height, width = samples.shape[:2]
        header = f"{self.magic}\n{width} {height}\n{SUPPORTED_MAXVAL}\n".encode("ascii")
        return header + np.ascontiguousarray(samples, dtype=np.uint8).tobytes()


class PGMReader(BaseImageReader):
    """Reader for binary graymaps (P5)"""

    @property
    def magic(self) -> str:
        return PGM_MAGIC

    @property
    def channels(self) -> int:
        return 1


class PPMReader(BaseImageReader):
    """Reader for binary pixmaps (P6)"""

    @property
    def magic(self) -> str:
        return PPM_MAGIC

    @property
    def channels(self) -> int:
        return 3


_READERS = [
    PGMReader(),
    PPMReader(),
]


def get_reader_for_magic(magic: str) -> Optional[BaseImageReader]:
    for reader in _READERS:
        if reader.can_read(magic):
            return reader
    return None


def get_reader_for_channels(channels: int) -> Optional[BaseImageReader]:
    for reader in _READERS:
        if reader.channels == channels:
            return reader
    return None


# ============================================================================
# Public Operations
# ============================================================================

def load_image(path) -> RasterImage:
    """
    Load a binary PGM (P5) or PPM (P6) file with maxval 255

    Args:
        path: Image file path

    Returns:
        8-bit RasterImage, 1 channel for PGM and 3 for PPM

    Raises:
        ImageNotFoundError: File does not exist
        MalformedHeaderError: Unsupported magic, bad fields, maxval other than 255
        TruncatedDataError: Payload shorter than width x height x channels
    """
    path = Path(path)

    if not path.is_file():
        raise ImageNotFoundError(get_error_message("file_not_found", path=path))

    try:
        payload = path.read_bytes()
    except OSError as e:
        raise ImageNotFoundError(f"{path}: {e}") from e

    magic = payload[:2].decode("ascii", errors="replace")
    reader = get_reader_for_magic(magic)
    if reader is None:
        raise MalformedHeaderError(f"{path}: " + get_error_message("bad_magic", magic=magic))

    image = reader.decode(payload, path)
    logger.debug(f"Loaded {image!r} from {path}")
    return image


def quantize(data: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half-up to uint8"""
    if data.dtype == np.uint8:
        return data
    return np.floor(np.clip(data, 0.0, 255.0) + 0.5).astype(np.uint8)


def save_image(image: RasterImage, path) -> None:
    """
    Write an image as binary PGM/PPM

    Real-valued samples are clamped to [0, 255] and rounded half-up.

    Raises:
        ImageWriteError: The file could not be written
    """
    path = Path(path)
    reader = get_reader_for_channels(image.channels)
    payload = reader.encode(quantize(image.data))

    if not write_binary_file(path, payload):
        raise ImageWriteError(f"Failed to write image: {path}")

    logger.debug(f"Saved {image!r} to {path}")


def to_gray(image: RasterImage) -> RasterImage:
    """
    Rec. 601 luma conversion, 0.299 R + 0.587 G + 0.114 B

    Raises:
        WrongChannelCountError: Input is not 3-channel

    Example:
        to_gray(from_array([[[255, 0, 0]]])).data[0, 0, 0]  # 76.245
    """
    if image.channels != 3:
        raise WrongChannelCountError(f"to_gray expects 3 channels, got {image.channels}")

    gray = image.data.astype(np.float64) @ np.asarray(GRAY_WEIGHTS, dtype=np.float64)
    # white maps to exactly 255.0
    return RasterImage(np.round(gray, GRAY_DECIMALS))


__all__ = [
    'RasterError',
    'ImageNotFoundError',
    'MalformedHeaderError',
    'TruncatedDataError',
    'WrongChannelCountError',
    'ImageWriteError',
    'InvalidRasterError',
    'RasterImage',
    'BinaryMask',
    'Contour',
    'from_array',
    'load_image',
    'save_image',
    'to_gray',
    'quantize',
]
