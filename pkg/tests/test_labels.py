"""
tests/test_labels.py
Grade names and integer encoding
"""

import pytest

from grading.labels import ALL_GRADES, GRADE_NAMES, GradeLabel, UnknownGradeError


def test_stable_encoding():
    assert [int(g) for g in ALL_GRADES] == [0, 1, 2, 3, 4, 5]
    assert GRADE_NAMES == (
        "Soft_Small", "Soft_Large", "Semi_Hard_Small", "Semi_Hard_Large", "Hard_Small", "Hard_Large",
    )


def test_names_render_in_strings_and_fstrings():
    grade = GradeLabel.SEMI_HARD_LARGE
    assert str(grade) == "Semi_Hard_Large"
    assert f"{grade}" == "Semi_Hard_Large"
    assert f"{grade}_{3:03d}" == "Semi_Hard_Large_003"


def test_surface_and_size():
    assert GradeLabel.SEMI_HARD_SMALL.surface == "Semi_Hard"
    assert GradeLabel.SEMI_HARD_SMALL.size == "Small"
    assert GradeLabel.HARD_LARGE.surface == "Hard"


def test_from_name():
    assert GradeLabel.from_name(" Hard_Small ") == GradeLabel.HARD_SMALL
    with pytest.raises(UnknownGradeError) as info:
        GradeLabel.from_name("hard_small", line_number=4)
    assert info.value.line_number == 4
