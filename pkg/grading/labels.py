"""
grading/labels.py
The six date grades (surface hardness x size)
"""

from enum import IntEnum

from utils.errors import PipelineError


class UnknownGradeError(PipelineError):
    """
    Grade name is not one of the six grades

    Attributes:
        grade: Offending text
        line_number: 1-based manifest line, when known
    """

    def __init__(self, grade: str, line_number: int = None):
        self.grade = grade
        self.line_number = line_number
        where = f" on line {line_number}" if line_number is not None else ""
        super().__init__(f"Unknown grade {grade!r}{where}")


class GradeLabel(IntEnum):
    """Stable integer encoding 0-5"""

    SOFT_SMALL = 0
    SOFT_LARGE = 1
    SEMI_HARD_SMALL = 2
    SEMI_HARD_LARGE = 3
    HARD_SMALL = 4
    HARD_LARGE = 5

    @property
    def display_name(self) -> str:
        """Manifest/report spelling, e.g. Semi_Hard_Large"""
        return _DISPLAY_NAMES[self]

    @property
    def surface(self) -> str:
        """Soft, Semi_Hard or Hard"""
        return self.display_name.rsplit("_", 1)[0]

    @property
    def size(self) -> str:
        """Small or Large"""
        return self.display_name.rsplit("_", 1)[1]

    @classmethod
    def from_name(cls, name: str, line_number: int = None) -> "GradeLabel":
        """
        Parse a display name (exact spelling)

        Raises:
            UnknownGradeError: Not one of the six names
        """
        label = _BY_NAME.get(name.strip())
        if label is None:
            raise UnknownGradeError(name, line_number)
        return label

    def __str__(self):
        return self.display_name

    def __format__(self, format_spec):
        return format(self.display_name, format_spec)


_DISPLAY_NAMES = {
    GradeLabel.SOFT_SMALL: "Soft_Small",
    GradeLabel.SOFT_LARGE: "Soft_Large",
    GradeLabel.SEMI_HARD_SMALL: "Semi_Hard_Small",
    GradeLabel.SEMI_HARD_LARGE: "Semi_Hard_Large",
    GradeLabel.HARD_SMALL: "Hard_Small",
    GradeLabel.HARD_LARGE: "Hard_Large",
}

_BY_NAME = {name: label for label, name in _DISPLAY_NAMES.items()}

ALL_GRADES = tuple(GradeLabel)
GRADE_NAMES = tuple(_DISPLAY_NAMES[label] for label in ALL_GRADES)


__all__ = ['GradeLabel', 'UnknownGradeError', 'ALL_GRADES', 'GRADE_NAMES']
