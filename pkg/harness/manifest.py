"""
harness/manifest.py
Dataset manifests: `path,grade` CSV, no header, UTF-8
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple

from config.settings import get_error_message
from grading.labels import ALL_GRADES, GradeLabel
from utils.errors import PipelineError
from utils.file_utils import make_relative_path, read_text_file, write_text_file
from utils.logger import get_logger

logger = get_logger(__name__)


# ============================================================================
# Exceptions
# ============================================================================

class ManifestError(PipelineError):
    """Base class for manifest errors"""
    pass


class ManifestNotFoundError(ManifestError):
    """Manifest file is missing or unreadable"""
    pass


class DuplicatePathError(ManifestError):
    """The same image path appears twice"""

    def __init__(self, path: str, line_number: int):
        self.path = path
        self.line_number = line_number
        super().__init__(get_error_message("duplicate_path", path=path, line=line_number))


class MalformedLineError(ManifestError):
    """A line is not `path,grade`"""

    def __init__(self, text: str, line_number: int):
        self.text = text
        self.line_number = line_number
        super().__init__(get_error_message("malformed_line", line=line_number, text=text))


# ============================================================================
# Types
# ============================================================================

@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    label: GradeLabel


class Manifest:
    """
    Ordered (path, grade) entries with unique paths

    Raises:
        DuplicatePathError: Two entries share a path
    """

    def __init__(self, entries: Sequence[Tuple[Path, GradeLabel]] = ()):
        self._entries: List[ManifestEntry] = []
        seen = set()
        for number, (path, label) in enumerate(entries, start=1):
            path = Path(path)
            if path in seen:
                raise DuplicatePathError(str(path), number)
            seen.add(path)
            self._entries.append(ManifestEntry(path, GradeLabel(int(label))))

    @property
    def entries(self) -> Tuple[ManifestEntry, ...]:
        return tuple(self._entries)

    @property
    def paths(self) -> List[Path]:
        return [entry.path for entry in self._entries]

    @property
    def labels(self) -> List[GradeLabel]:
        return [entry.label for entry in self._entries]

    def by_grade(self) -> Dict[GradeLabel, List[Path]]:
        """Paths per grade, every grade present as a key"""
        groups = {grade: [] for grade in ALL_GRADES}
        for entry in self._entries:
            groups[entry.label].append(entry.path)
        return groups

    def counts(self) -> Dict[GradeLabel, int]:
        return {grade: len(paths) for grade, paths in self.by_grade().items()}

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[ManifestEntry]:
        return iter(self._entries)

    def __repr__(self):
        return f"Manifest(entries={len(self._entries)})"


# ============================================================================
# I/O
# ============================================================================

def parse_manifest(text: str, base_dir: Path = Path(".")) -> Manifest:
    """
    Parse manifest text; relative paths resolve against base_dir

    Raises:
        MalformedLineError: Line without exactly one comma or with an empty field
        UnknownGradeError: Grade is not one of the six (carries line_number)
        DuplicatePathError: Path repeated
    """
    entries = []
    seen = {}
    for number, line in enumerate(text.splitlines(), start=1):
        text_line = line.strip()
        if not text_line:
            continue

        fields = text_line.split(",")
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise MalformedLineError(text_line, number)

        raw_path = fields[0].strip()
        label = GradeLabel.from_name(fields[1], line_number=number)

        path = Path(raw_path)
        if not path.is_absolute():
            path = Path(base_dir) / path

        if path in seen:
            raise DuplicatePathError(raw_path, number)
        seen[path] = number
        entries.append((path, label))

    return Manifest(entries)


def load_manifest(path) -> Manifest:
    """
    Load a manifest CSV

    Example:
        manifest = load_manifest("data/manifest.csv")  # lines like imgs/a.ppm,Hard_Small
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestNotFoundError(get_error_message("file_not_found", path=path))

    text = read_text_file(path)
    if text is None:
        raise ManifestNotFoundError(f"Failed to read manifest: {path}")

    manifest = parse_manifest(text, path.parent)
    logger.info(f"Loaded manifest {path} with {len(manifest)} entries")
    return manifest


def save_manifest(manifest: Manifest, path) -> None:
    """
    Write `path,grade` rows, paths relative to the manifest's directory

    Raises:
        ManifestError: The file could not be written
    """
    path = Path(path)
    lines = [
        f"{make_relative_path(entry.path, path.parent).as_posix()},{entry.label}"
        for entry in manifest
    ]
    if not write_text_file(path, "\n".join(lines) + ("\n" if lines else "")):
        raise ManifestError(f"Failed to write manifest: {path}")
    logger.debug(f"Saved {manifest!r} to {path}")


__all__ = [
    'ManifestError',
    'ManifestNotFoundError',
    'DuplicatePathError',
    'MalformedLineError',
    'ManifestEntry',
    'Manifest',
    'parse_manifest',
    'load_manifest',
    'save_manifest',
]
