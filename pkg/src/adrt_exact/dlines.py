"""Digital lines as explicit pixel sets and a brute-force transform.

Everything here is deliberately slow and literal. It is the ground truth
the fast transform is checked against, so it shares no code with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import AdrtIndexError, Image, SectionedTransform, buffer_width, section_view


@dataclass(frozen=True)
class DigitalLine:
    m: int
    h: int
    s: int
    pixels: tuple  # ((i, j), ...) sorted by row j

    @property
    def columns(self) -> tuple:
        return tuple(i for i, _ in self.pixels)


@lru_cache(maxsize=None)
def _line_pixels(m: int, h: int, s: int) -> tuple:
    if m == 0:
        return ((h, 0),)
    t, odd = divmod(s, 2)
    lower = _line_pixels(m - 1, h, t)
    upper = _line_pixels(m - 1, h + t + odd, t)
    shift = 1 << (m - 1)
    return lower + tuple((i, j + shift) for i, j in upper)


def digital_line(m: int, h: int, s: int) -> DigitalLine:
    """Pixels of the digital line with bottom column ``h`` and rise ``s``.

    Built by gluing two half-height lines of slope ``s // 2``; the upper
    half starts at column ``h + s // 2`` (even ``s``) or one further right
    (odd ``s``).

    >>> digital_line(2, 0, 3).pixels
    ((0, 0), (1, 1), (2, 2), (3, 3))
    """
    if m < 0:
        raise AdrtIndexError(f"level must be >= 0, got {m}")
    if not 0 <= s < (1 << m):
        raise AdrtIndexError(f"slope {s} outside 0..{(1 << m) - 1} at level {m}")
    # lru_cache is thread-safe for pure results
    return DigitalLine(m, int(h), int(s), _line_pixels(m, int(h), int(s)))


def adrt_direct(img: Image, m: int, section: int, h: int, s: int) -> float:
    """Sum of one image section over the pixels of ``digital_line(m, h, s)``."""
    view = section_view(img, m, section)
    return float(sum(view.at(i, j) for i, j in digital_line(m, h, s).pixels))


def adrt_direct_full(img: Image, m: int) -> SectionedTransform:
    """Brute-force transform of every section at level ``m``."""
    if not 0 <= m <= img.n:
        raise AdrtIndexError(f"level m={m} outside 0..{img.n}")
    n = img.n
    side = 1 << n
    data = np.zeros((1 << (n - m), 1 << m, buffer_width(n, m)))
    for sec in range(1 << (n - m)):
        for s in range(1 << m):
            for h in range(-s, side):
                data[sec, s, h + s] = adrt_direct(img, m, sec, h, s)
    return SectionedTransform(n, m, data)
