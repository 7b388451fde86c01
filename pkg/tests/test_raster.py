"""
tests/test_raster.py
PGM/PPM I/O, containers and gray conversion
"""

import numpy as np
import pytest

from imaging.raster import (
    BinaryMask,
    Contour,
    ImageNotFoundError,
    InvalidRasterError,
    MalformedHeaderError,
    RasterImage,
    TruncatedDataError,
    WrongChannelCountError,
    from_array,
    get_reader_for_magic,
    load_image,
    quantize,
    save_image,
    to_gray,
)


def test_load_pgm(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 64, 128, 255]))

    image = load_image(path)

    assert image.is_gray and image.is_8bit
    assert image.to_array().tolist() == [[0, 64], [128, 255]]


def test_load_ppm_with_comments(tmp_path):
    path = tmp_path / "a.ppm"
    path.write_bytes(b"P6 # made by hand\n1 1\n# maxval next\n255\n" + bytes([10, 20, 30]))

    image = load_image(path)

    assert image.channels == 3
    assert image.data[0, 0].tolist() == [10, 20, 30]


def test_16bit_maxval_rejected(tmp_path):
    path = tmp_path / "deep.ppm"
    path.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))

    with pytest.raises(MalformedHeaderError):
        load_image(path)


def test_unknown_magic_rejected(tmp_path):
    path = tmp_path / "ascii.pgm"
    path.write_bytes(b"P2\n1 1\n255\n0\n")

    with pytest.raises(MalformedHeaderError):
        load_image(path)


def test_truncated_payload(tmp_path):
    path = tmp_path / "short.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([1, 2, 3]))

    with pytest.raises(TruncatedDataError):
        load_image(path)


def test_missing_file(tmp_path):
    with pytest.raises(ImageNotFoundError):
        load_image(tmp_path / "nope.ppm")


def test_save_gray_payload(tmp_path):
    path = tmp_path / "out.pgm"
    save_image(from_array(np.array([[0, 255]], dtype=np.uint8)), path)

    assert path.read_bytes() == b"P5\n2 1\n255\n" + bytes([0, 255])


def test_round_trip_is_identity(tmp_path, rng):
    pixels = rng.integers(0, 256, size=(7, 5, 3), dtype=np.uint8)
    image = RasterImage(pixels)
    path = tmp_path / "rt.ppm"

    save_image(image, path)

    assert load_image(path).same_pixels(image)


@pytest.mark.parametrize("value, expected", [(254.6, 255), (-3.0, 0), (127.5, 128), (300.0, 255)])
def test_quantize_clamps_and_rounds(value, expected):
    assert quantize(np.array([value]))[0] == expected


def test_to_gray_weights():
    pixels = np.array([[[255, 255, 255], [255, 0, 0], [0, 0, 0]]], dtype=np.uint8)

    gray = to_gray(RasterImage(pixels)).plane(0)

    assert gray[0, 0] == 255.0
    assert np.floor(gray[0, 0]) == 255
    assert gray[0, 1] == pytest.approx(76.245, abs=1e-9)
    assert gray[0, 2] == 0.0


def test_to_gray_needs_rgb():
    with pytest.raises(WrongChannelCountError):
        to_gray(from_array(np.zeros((2, 2))))


def test_images_are_immutable():
    image = from_array(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        image.data[0, 0, 0] = 1.0


def test_invalid_shapes_rejected():
    with pytest.raises(InvalidRasterError):
        RasterImage(np.zeros((2, 2, 2)))
    with pytest.raises(InvalidRasterError):
        BinaryMask(np.zeros((0, 3)))


def test_mask_and_contour_helpers():
    mask = BinaryMask.from_array([[0, 3], [1, 0]])
    assert mask.foreground_count == 2
    assert mask.to_image().plane(0).tolist() == [[0, 255], [255, 0]]
    assert Contour([[1, 2], [3, 4]]).to_csv() == "1,2\n3,4\n"


def test_reader_registry():
    assert get_reader_for_magic("P5").channels == 1
    assert get_reader_for_magic("P6").channels == 3
    assert get_reader_for_magic("P3") is None
