"""Containers, index conventions and quadrant symmetries.

Conventions used throughout the package (all 0-based):

* an image of exponent ``n`` has side ``2**n``; ``i`` is the column and
  ``j`` the row, with ``j`` increasing upward;
* a section at level ``m`` is the horizontal strip of ``2**m`` rows
  starting at row ``l * 2**m``;
* a digital line at level ``m`` has slope ``s`` in ``0 .. 2**m - 1`` and
  intercept ``h`` in ``-s .. 2**n - 1`` (outside that range its sum is 0);
* transform buffers store intercept ``h`` at physical offset ``p = h + s``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class AdrtError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(AdrtError, ValueError):
    """Input does not describe a ``2**n x 2**n`` grid."""


class IngestError(AdrtError, ValueError):
    """Input contains values that cannot be transformed (NaN, Inf)."""


class StructuralError(AdrtError, ValueError):
    """A transform buffer has the wrong shape, level or padding."""


class AdrtIndexError(AdrtError, IndexError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def exponent_of(side: int) -> int:
    """Return ``n`` with ``2**n == side`` or raise :class:`DimensionError`."""
    if side < 1 or side & (side - 1):
        raise DimensionError(f"side length {side} is not a power of two")
    return side.bit_length() - 1


@dataclass(frozen=True)
class Image:
    """A real ``2**n x 2**n`` image.

    ``values`` is stored row-major as ``values[j, i]`` so that the flat
    layout agrees with :func:`image_from_values`. Use :meth:`at` for
    ``(i, j)`` access with zero extension.
    """

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError(f"exponent must be >= 0, got {self.n}")
        v = np.asarray(self.values, dtype=np.float64)
        side = 1 << self.n
        if v.shape != (side, side):
            raise DimensionError(
                f"expected shape ({side}, {side}) for n={self.n}, got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise IngestError("image contains non-finite values")
        object.__setattr__(self, "values", _frozen(v))

    @classmethod
    def from_array(cls, a) -> "Image":
        """Build from a square 2-D array indexed ``[j, i]``."""
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square 2-D array, got shape {a.shape}")
        return cls(exponent_of(a.shape[0]), a)

    @property
    def side(self) -> int:
        return 1 << self.n

    def at(self, i: int, j: int) -> float:
        if 0 <= i < self.side and 0 <= j < self.side:
            return float(self.values[j, i])
        return 0.0

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    __hash__ = None


def image_from_values(n: int, values) -> Image:
    """Build an image from a flat row-major sequence of ``4**n`` numbers.

    Element ``j * 2**n + i`` becomes pixel ``(i, j)``.
    """
    flat = np.asarray(values, dtype=np.float64).ravel()
    if n < 0 or flat.size != 4**n:
        raise DimensionError(
            f"expected {4 ** n if n >= 0 else '4**n'} values for n={n}, got {flat.size}"
        )
    side = 1 << n
    return Image(n, flat.reshape(side, side))


@dataclass(frozen=True)
class SectionView:
    """Read-only ``2**n x 2**m`` window of an image (zero outside)."""

    image: Image
    m: int
    section: int

    @property
    def values(self) -> np.ndarray:
        rows = 1 << self.m
        start = self.section * rows
        return self.image.values[start : start + rows, :]

    def at(self, i: int, j: int) -> float:
        if 0 <= j < (1 << self.m):
            return self.image.at(i, j + self.section * (1 << self.m))
        return 0.0


def section_view(img: Image, m: int, section: int) -> SectionView:
    if not 0 <= m <= img.n:
        raise AdrtIndexError(f"level m={m} outside 0..{img.n}")
    count = 1 << (img.n - m)
    if not 0 <= section < count:
        raise AdrtIndexError(f"section {section} outside 0..{count - 1}")
    return SectionView(img, m, section)


def buffer_width(n: int, m: int) -> int:
    """Number of physical offsets per slope row at level ``m``."""
    return (1 << n) + (1 << m) - 1


def support_mask(n: int, m: int) -> np.ndarray:
    """Boolean ``(2**m, width)`` mask, true where ``-s <= h <= 2**n - 1``."""
    p = np.arange(buffer_width(n, m))
    s = np.arange(1 << m)[:, None]
    return p[None, :] < (1 << n) + s


@dataclass(frozen=True)
class SectionedTransform:
    """Stack of section transforms at one level.

    ``data`` has shape ``(2**(n-m), 2**m, 2**n + 2**m - 1)`` and is indexed
    ``[section, slope, h + slope]``.
    """

    n: int
    m: int
    data: np.ndarray

    def __post_init__(self):
        if not 0 <= self.m <= self.n:
            raise StructuralError(f"level m={self.m} outside 0..{self.n}")
        d = np.asarray(self.data, dtype=np.float64)
        expected = (1 << (self.n - self.m), 1 << self.m, buffer_width(self.n, self.m))
        if d.shape != expected:
            raise StructuralError(
                f"buffer shape {d.shape} does not match {expected} for n={self.n}, m={self.m}"
            )
        object.__setattr__(self, "data", _frozen(d))

    @classmethod
    def zeros(cls, n: int, m: int) -> "SectionedTransform":
        return cls(n, m, np.zeros((1 << (n - m), 1 << m, buffer_width(n, m))))

    @property
    def num_sections(self) -> int:
        return self.data.shape[0]

    @property
    def num_slopes(self) -> int:
        return self.data.shape[1]

    def value(self, section: int, h: int, s: int) -> float:
        """Logical read ``R(section, h, s)``; 0 outside ``-s <= h < 2**n``."""
        if not 0 <= s < self.num_slopes:
            raise AdrtIndexError(f"slope {s} outside 0..{self.num_slopes - 1}")
        if not 0 <= section < self.num_sections:
            raise AdrtIndexError(f"section {section} outside 0..{self.num_sections - 1}")
        if h < -s or h > (1 << self.n) - 1:
            return 0.0
        return float(self.data[section, s, h + s])

    def row(self, section: int, s: int) -> np.ndarray:
        """Values for ``h = -s .. 2**n - 1`` (padding stripped)."""
        return self.data[section, s, : (1 << self.n) + s]

    def padding_is_zero(self) -> bool:
        return not np.any(self.data[:, ~support_mask(self.n, self.m)])

    def __eq__(self, other):
        if not isinstance(other, SectionedTransform):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and np.array_equal(
            self.data, other.data
        )

    __hash__ = None


class Quadrant(enum.IntEnum):
    """Image symmetry applied before the single-quadrant transform."""

    IDENTITY = 0
    TRANSPOSE = 1
    FLIP_COLUMNS = 2
    TRANSPOSE_FLIP = 3


def _flip_columns(v: np.ndarray) -> np.ndarray:
    # values are [j, i]; i -> 2**n - 1 - i
    return v[:, ::-1]


def apply_quadrant_symmetry(img: Image, q: Quadrant | int) -> Image:
    q = Quadrant(q)
    v = img.values
    if q is Quadrant.IDENTITY:
        out = v
    elif q is Quadrant.TRANSPOSE:
        out = v.T
    elif q is Quadrant.FLIP_COLUMNS:
        out = _flip_columns(v)
    else:
        out = _flip_columns(v.T)
    return Image(img.n, out)


def invert_quadrant_symmetry(img: Image, q: Quadrant | int) -> Image:
    """Undo :func:`apply_quadrant_symmetry`.

    Quadrants 0-2 are involutions; quadrant 3 is undone by flipping the
    columns and then transposing.
    """
    q = Quadrant(q)
    if q is not Quadrant.TRANSPOSE_FLIP:
        return apply_quadrant_symmetry(img, q)
    return Image(img.n, _flip_columns(img.values).T)


@dataclass
class CostLedger:
    """Running count of additions and subtractions, broken down by level."""

    additions: int = 0
    subtractions: int = 0
    per_level: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.additions + self.subtractions

    def record(self, level: int, additions: int = 0, subtractions: int = 0) -> None:
        if additions < 0 or subtractions < 0:
            raise ValueError("operation counts are nonnegative")
        self.additions += additions
        self.subtractions += subtractions
        a, s = self.per_level.get(level, (0, 0))
        self.per_level[level] = (a + additions, s + subtractions)
