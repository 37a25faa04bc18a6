import struct
import warnings

import numpy as np
import pytest
from hypothesis import given

from adrt_exact import DimensionError, Image, Quadrant, StructuralError, adrt_single_quadrant
from adrt_exact.fileio import (
    FormatError,
    read_image,
    read_transform,
    write_image,
    write_transform,
)

from conftest import images, int_image


def test_csv_roundtrip(tmp_path, img2):
    p = tmp_path / "a.csv"
    write_image(img2, p)
    assert read_image(p) == img2
    # top row of the file is the highest j
    assert p.read_text().splitlines()[0] == "3.0,4.0"


@given(images(max_n=4, integer=False))
def test_csv_roundtrip_floats(tmp_path_factory, img):
    p = tmp_path_factory.mktemp("csv") / "a.csv"
    write_image(img, p)
    assert read_image(p) == img


@given(images(max_n=4, integer=False))
def test_raw_roundtrip(tmp_path_factory, img):
    p = tmp_path_factory.mktemp("raw") / "a.adri"
    write_image(img, p)
    assert read_image(p) == img


def test_raw_header(tmp_path, img2):
    p = tmp_path / "a.adri"
    write_image(img2, p)
    data = p.read_bytes()
    assert data[:8] == b"ADRI\x01\x01\x00\x00"
    assert np.frombuffer(data[8:], "<f8").tolist() == [1, 2, 3, 4]


def test_raw_truncated(tmp_path, img2):
    p = tmp_path / "a.adri"
    write_image(img2, p)
    p.write_bytes(p.read_bytes()[:-3])
    with pytest.raises(FormatError, match="length"):
        read_image(p)


@pytest.mark.parametrize("high", [256, 65536])
def test_pgm_roundtrip(tmp_path, rng, high):
    img = int_image(rng, 4, high)
    p = tmp_path / "a.pgm"
    write_image(img, p)
    assert read_image(p) == img


def test_pgm_p2_with_comments(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n# a comment\n2 2\n# another\n10\n3 4\n1 2\n")
    img = read_image(p)
    assert img.values.tolist() == [[1, 2], [3, 4]]


def test_pgm_p5_16bit(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P5 2 2 1000\n" + struct.pack(">4H", 3, 4, 1, 1000))
    assert read_image(p).values.tolist() == [[1, 1000], [3, 4]]


def test_pgm_non_power_of_two(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P5\n3 3\n255\n" + bytes(9))
    with pytest.raises(DimensionError):
        read_image(p)


def test_pgm_not_square(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P5\n4 2\n255\n" + bytes(8))
    with pytest.raises(DimensionError):
        read_image(p)


def test_pgm_bad_magic(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P6\n2 2\n255\n" + bytes(12))
    with pytest.raises(FormatError) as exc:
        read_image(p)
    assert exc.value.offset == 0


def test_pgm_short_payload(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes(3))
    with pytest.raises(FormatError, match="offset 11"):
        read_image(p)


def test_pgm_rejects_fractional(tmp_path):
    with pytest.raises(FormatError):
        write_image(Image.from_array([[0.5, 1], [1, 1]]), tmp_path / "a.pgm")


def test_csv_non_square(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2,3\n4,5,6\n7,8,9\n")
    with pytest.raises(DimensionError):
        read_image(p)
    p.write_text("1,2\n3\n")
    with pytest.raises(DimensionError):
        read_image(p)


def test_unknown_extension(tmp_path, img2):
    with pytest.raises(FormatError):
        write_image(img2, tmp_path / "a.png")


def test_transform_roundtrip(tmp_path, rng):
    t = adrt_single_quadrant(int_image(rng, 4))
    p = tmp_path / "t.adrt"
    write_transform(t, p, Quadrant.TRANSPOSE)
    back, q = read_transform(p)
    assert q is Quadrant.TRANSPOSE
    assert back.data.tobytes() == t.data.tobytes()


def test_transform_layout(tmp_path, img2):
    p = tmp_path / "t.adrt"
    write_transform(adrt_single_quadrant(img2), p)
    data = p.read_bytes()
    assert data[:12] == b"ADRT\x01\x01\x01\xff\x00\x00\x00\x00"
    # s=0: h=0,1 then padding; s=1: h=-1,0,1
    assert np.frombuffer(data[12:], "<f8").tolist() == [4, 6, 0, 3, 5, 2]
    assert read_transform(p)[1] is None


def test_transform_intermediate_level(tmp_path, rng):
    from adrt_exact import adrt_init, merge_level

    t = merge_level(adrt_init(int_image(rng, 3)))
    p = tmp_path / "t.adrt"
    write_transform(t, p)
    assert len(p.read_bytes()) == 12 + 8 * 4 * 2 * 9
    assert read_transform(p)[0] == t


def _tamper(path, offset, value):
    data = bytearray(path.read_bytes())
    data[offset] = value
    path.write_bytes(bytes(data))


def test_transform_bad_version(tmp_path, img2):
    p = tmp_path / "t.adrt"
    write_transform(adrt_single_quadrant(img2), p)
    _tamper(p, 4, 2)
    with pytest.raises(FormatError, match="version"):
        read_transform(p)


def test_transform_bad_magic(tmp_path, img2):
    p = tmp_path / "t.adrt"
    write_transform(adrt_single_quadrant(img2), p)
    _tamper(p, 0, ord("X"))
    with pytest.raises(FormatError, match="magic"):
        read_transform(p)


def test_transform_length_mismatch(tmp_path, img2):
    p = tmp_path / "t.adrt"
    write_transform(adrt_single_quadrant(img2), p)
    p.write_bytes(p.read_bytes() + bytes(8))
    with pytest.raises(FormatError, match="length"):
        read_transform(p)


def test_transform_nonzero_padding(tmp_path, img2):
    t = adrt_single_quadrant(img2)
    data = t.data.copy()
    data[0, 0, 2] = 1.0
    p = tmp_path / "t.adrt"
    p.write_bytes(b"ADRT\x01\x01\x01\x00" + bytes(4) + data.astype("<f8").tobytes())
    with pytest.raises(StructuralError):
        read_transform(p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        back, _ = read_transform(p, strict=False)
    assert caught and back.data[0, 0, 2] == 1.0
