"""Image and transform files.

Image formats (PGM, CSV) are stored top row first, so file row 0 is image
row ``j = 2**n - 1``. The raw ``ADRI`` format stores rows in image order
(``j = 0`` first), matching :func:`image_from_values`.

Transform files (``ADRT``) carry a 12-byte header::

    magic "ADRT" | version u8 | n u8 | m u8 | quadrant u8 | 4 zero bytes

followed by little-endian float64 values in ``[section, slope, offset]``
order, padding included.
"""

from __future__ import annotations

import csv
import struct
import warnings
from pathlib import Path

import numpy as np

from .core import (
    AdrtError,
    DimensionError,
    Image,
    Quadrant,
    SectionedTransform,
    StructuralError,
    buffer_width,
    exponent_of,
)

TRANSFORM_MAGIC = b"ADRT"
IMAGE_MAGIC = b"ADRI"
VERSION = 1
RAW_QUADRANT = 255

_TRANSFORM_HEADER = struct.Struct("<4sBBBB4s")
_IMAGE_HEADER = struct.Struct("<4sBB2s")

_EXTENSIONS = {".pgm": "pgm", ".csv": "csv", ".adri": "raw", ".raw": "raw", ".bin": "raw"}


class FormatError(AdrtError, ValueError):
    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def guess_format(path, fmt: str | None = None) -> str:
    if fmt:
        if fmt not in ("pgm", "csv", "raw"):
            raise FormatError(f"unknown image format {fmt!r}")
        return fmt
    ext = Path(path).suffix.lower()
    if ext not in _EXTENSIONS:
        raise FormatError(f"cannot infer image format from extension {ext!r}")
    return _EXTENSIONS[ext]


def _from_file_rows(rows: np.ndarray) -> Image:
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        raise DimensionError(f"image must be square, got {rows.shape[1]}x{rows.shape[0]}")
    exponent_of(rows.shape[0])
    return Image.from_array(rows[::-1])


# PGM


def _pgm_tokens(data: bytes, count: int):
    """Return ``count`` header tokens and the offset just past the last one."""
    tokens = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise FormatError("truncated PGM header", pos)
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append((data[start:pos], start))
    return tokens, pos


def _read_pgm(path) -> Image:
    data = Path(path).read_bytes()
    tokens, pos = _pgm_tokens(data, 4)
    magic = tokens[0][0]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"not a PGM file (magic {magic!r})", 0)
    try:
        width, height, maxval = (int(t) for t, _ in tokens[1:])
    except ValueError:
        raise FormatError("non-integer PGM header field", tokens[1][1]) from None
    if not 0 < maxval <= 65535:
        raise FormatError(f"PGM maxval {maxval} outside 1..65535", tokens[3][1])
    if width != height:
        raise DimensionError(f"image must be square, got {width}x{height}")
    exponent_of(width)
    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        payload = data[pos:]
        if len(payload) != count * dtype.itemsize:
            raise FormatError(
                f"expected {count * dtype.itemsize} bytes of pixel data, got {len(payload)}",
                pos,
            )
        pixels = np.frombuffer(payload, dtype=dtype).astype(np.float64)
    else:
        try:
            pixels = np.array(data[pos:].split(), dtype=np.int64)
        except ValueError:
            raise FormatError("non-integer pixel in P2 data", pos) from None
        if pixels.size != count:
            raise FormatError(f"expected {count} pixels, got {pixels.size}", pos)
        pixels = pixels.astype(np.float64)
    if pixels.max(initial=0) > maxval:
        raise FormatError("pixel value exceeds maxval")
    return _from_file_rows(pixels.reshape(height, width))


def _write_pgm(img: Image, path) -> None:
    v = img.values
    if np.any(v < 0) or np.any(v > 65535) or np.any(v != np.round(v)):
        raise FormatError("PGM requires integer pixel values in 0..65535")
    maxval = 255 if v.max(initial=0) <= 255 else 65535
    dtype = "u1" if maxval == 255 else ">u2"
    header = f"P5\n{img.side} {img.side}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + v[::-1].astype(dtype).tobytes())


# CSV


def _read_csv(path) -> Image:
    with open(path, newline="") as f:
        rows = [r for r in csv.reader(f) if r]
    try:
        values = [[float(x) for x in r] for r in rows]
    except ValueError as exc:
        raise FormatError(f"bad CSV value: {exc}") from None
    if not values or any(len(r) != len(values) for r in values):
        raise DimensionError(
            f"CSV must be square, got {len(values)} rows of lengths "
            f"{sorted({len(r) for r in values})}"
        )
    return _from_file_rows(np.array(values))


def _write_csv(img: Image, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        for row in img.values[::-1]:
            w.writerow([repr(float(x)) for x in row])


# raw float64


def _read_raw(path) -> Image:
    data = Path(path).read_bytes()
    if len(data) < _IMAGE_HEADER.size:
        raise FormatError("truncated raw image header", len(data))
    magic, version, n, _ = _IMAGE_HEADER.unpack_from(data)
    if magic != IMAGE_MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported raw image version {version}", 4)
    expected = 8 * 4**n
    payload = data[_IMAGE_HEADER.size :]
    if len(payload) != expected:
        raise FormatError(
            f"payload length {len(payload)} does not match {expected} for n={n}",
            _IMAGE_HEADER.size,
        )
    side = 1 << n
    return Image(n, np.frombuffer(payload, dtype="<f8").reshape(side, side))


def _write_raw(img: Image, path) -> None:
    header = _IMAGE_HEADER.pack(IMAGE_MAGIC, VERSION, img.n, b"\0\0")
    Path(path).write_bytes(header + img.values.astype("<f8").tobytes())


_READERS = {"pgm": _read_pgm, "csv": _read_csv, "raw": _read_raw}
_WRITERS = {"pgm": _write_pgm, "csv": _write_csv, "raw": _write_raw}


def read_image(path, fmt: str | None = None) -> Image:
    return _READERS[guess_format(path, fmt)](path)


def write_image(img: Image, path, fmt: str | None = None) -> None:
    _WRITERS[guess_format(path, fmt)](img, path)


# transforms


def write_transform(
    transform: SectionedTransform, path, quadrant: Quadrant | int | None = None
) -> None:
    q = RAW_QUADRANT if quadrant is None else int(Quadrant(quadrant))
    header = _TRANSFORM_HEADER.pack(
        TRANSFORM_MAGIC, VERSION, transform.n, transform.m, q, b"\0" * 4
    )
    Path(path).write_bytes(header + transform.data.astype("<f8").tobytes())


def read_transform(path, strict: bool = True):
    """Read an ``ADRT`` file.

    Returns ``(transform, quadrant)`` where ``quadrant`` is ``None`` for
    files written without a symmetry tag. Nonzero padding raises
    :class:`StructuralError` when ``strict``, otherwise it warns.
    """
    data = Path(path).read_bytes()
    if len(data) < _TRANSFORM_HEADER.size:
        raise FormatError("truncated transform header", len(data))
    magic, version, n, m, q, reserved = _TRANSFORM_HEADER.unpack_from(data)
    if magic != TRANSFORM_MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported transform version {version}", 4)
    if m > n:
        raise FormatError(f"level m={m} exceeds n={n}", 6)
    if q != RAW_QUADRANT and q > 3:
        raise FormatError(f"invalid quadrant {q}", 7)
    if reserved != b"\0" * 4:
        raise FormatError("reserved header bytes are not zero", 8)
    shape = (1 << (n - m), 1 << m, buffer_width(n, m))
    expected = 8 * int(np.prod(shape))
    payload = data[_TRANSFORM_HEADER.size :]
    if len(payload) != expected:
        raise FormatError(
            f"payload length {len(payload)} does not match {expected} for n={n}, m={m}",
            _TRANSFORM_HEADER.size,
        )
    t = SectionedTransform(n, m, np.frombuffer(payload, dtype="<f8").reshape(shape))
    if not t.padding_is_zero():
        msg = f"{path}: nonzero values in transform padding"
        if strict:
            raise StructuralError(msg)
        warnings.warn(msg, stacklevel=2)
    return t, (None if q == RAW_QUADRANT else Quadrant(q))
