"""Exact inverse of the single-quadrant transform.

Each level is undone independently: differences in the intercept of the
two half-height transforms are read off the level above, and a running
sum over ascending intercepts restores them. Because every transform
vanishes for ``h < -s`` the running sum starts from an exact zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import run_blocks
from .core import (
    AdrtIndexError,
    CostLedger,
    Image,
    Quadrant,
    SectionedTransform,
    StructuralError,
    buffer_width,
    invert_quadrant_symmetry,
)


@dataclass(frozen=True)
class DeltaBuffer:
    """Intercept differences for one target section at level ``m``.

    ``values[s, k]`` holds ``R(h+1, s) - R(h, s)`` with ``k = h + s + 1``,
    for ``h`` in ``-s-1 .. 2**n - 2``. Entries with ``k >= 2**n + s`` are 0.
    """

    n: int
    m: int
    values: np.ndarray

    def value(self, h: int, s: int) -> float:
        if not -s - 1 <= h <= (1 << self.n) - 2:
            raise AdrtIndexError(f"delta intercept {h} outside window for slope {s}")
        return float(self.values[s, h + s + 1])


def _target_mask(n: int, m: int, slopes: np.ndarray) -> np.ndarray:
    k = np.arange(buffer_width(n, m))
    return k[None, :] < (1 << n) + slopes[:, None]


def _deltas(upper: np.ndarray, n: int, m: int, slopes: np.ndarray):
    """Batched differences for target level ``m - 1``.

    ``upper`` is ``(S, 2**m, width_m)``; returns two ``(S, len(slopes),
    width_{m-1})`` arrays for the lower and upper halves of each section.
    """
    k = np.arange(buffer_width(n, m - 1))
    # one column of left padding covers the k - 1 read
    up = np.zeros(upper.shape[:2] + (upper.shape[2] + 1,))
    up[:, :, 1:] = upper
    ev_rows = (2 * slopes)[:, None]
    od_rows = ev_rows + 1

    # R(h+1, 2s) and R(h, 2s+1) share physical offset h + 2s + 1 = k + s
    shifted = k[None, :] + slopes[:, None] + 1
    lower_half = up[:, ev_rows, shifted] - up[:, od_rows, shifted]
    # R(h-s, 2s+1) sits at k, R(h-s, 2s) at k - 1
    upper_half = up[:, od_rows, k[None, :] + 1] - up[:, ev_rows, k[None, :]]

    mask = _target_mask(n, m - 1, slopes)
    lower_half[:, ~mask] = 0.0
    upper_half[:, ~mask] = 0.0
    return lower_half, upper_half


def _prefix(delta: np.ndarray, n: int, m: int, slopes: np.ndarray) -> np.ndarray:
    # np.cumsum accumulates sequentially in ascending index order
    out = np.cumsum(delta, axis=-1)
    out[..., ~_target_mask(n, m, slopes)] = 0.0
    return out


def _ops_per_section(n: int, m: int) -> int:
    # produced entries of one target section at level m
    return int(_target_mask(n, m, np.arange(1 << m)).sum())


def compute_deltas(
    upper: SectionedTransform, section: int, ledger: CostLedger | None = None
) -> tuple:
    """Differences for the two halves of ``upper`` section ``section``.

    With ``R`` the level-``m`` transform and target slope ``s``::

        lower(h, s) = R(h+1, 2s) - R(h, 2s+1)
        upper(h, s) = R(h-s, 2s+1) - R(h-s, 2s)
    """
    if upper.m < 1:
        raise StructuralError("level-0 transform has nothing to split")
    if not 0 <= section < upper.num_sections:
        raise AdrtIndexError(f"section {section} outside 0..{upper.num_sections - 1}")
    n, m = upper.n, upper.m
    slopes = np.arange(1 << (m - 1))
    lo, hi = _deltas(upper.data[section : section + 1], n, m, slopes)
    if ledger is not None:
        ledger.record(m - 1, subtractions=2 * _ops_per_section(n, m - 1))
    return DeltaBuffer(n, m - 1, lo[0]), DeltaBuffer(n, m - 1, hi[0])


def prefix_restore(delta: DeltaBuffer, ledger: CostLedger | None = None) -> np.ndarray:
    """Running sum of ``delta`` over ascending ``h``.

    Returns a ``(2**m, width)`` buffer indexed ``[s, h + s]``.
    """
    slopes = np.arange(1 << delta.m)
    out = _prefix(delta.values, delta.n, delta.m, slopes)
    if ledger is not None:
        ledger.record(delta.m, additions=_ops_per_section(delta.n, delta.m))
    return out


def split_level(
    upper: SectionedTransform, ledger: CostLedger | None = None, workers: int = 1
) -> SectionedTransform:
    """Recover the level ``m-1`` stack from the level ``m`` stack."""
    if upper.m < 1:
        raise StructuralError("level-0 transform has nothing to split")
    n, m = upper.n, upper.m
    num_upper = upper.num_sections
    out = np.zeros((2 * num_upper, 1 << (m - 1), buffer_width(n, m - 1)))
    src = upper.data

    def work(a, b, lo, hi):
        slopes = np.arange(lo, hi)
        d_lo, d_hi = _deltas(src[a:b], n, m, slopes)
        out[2 * a : 2 * b : 2, lo:hi] = _prefix(d_lo, n, m - 1, slopes)
        out[2 * a + 1 : 2 * b : 2, lo:hi] = _prefix(d_hi, n, m - 1, slopes)

    run_blocks(work, num_upper, out.shape[1], workers)
    if ledger is not None:
        per = 2 * num_upper * _ops_per_section(n, m - 1)
        ledger.record(m - 1, additions=per, subtractions=per)
    return SectionedTransform(n, m - 1, out)


def iadrt(
    transform: SectionedTransform, ledger: CostLedger | None = None, workers: int = 1
) -> Image:
    """Reconstruct the image from its single-quadrant transform."""
    if not isinstance(transform, SectionedTransform):
        raise StructuralError("expected a SectionedTransform")
    if transform.m != transform.n or transform.num_sections != 1:
        raise StructuralError(
            f"expected a single level-n section, got level {transform.m} "
            f"with {transform.num_sections} sections"
        )
    if not transform.padding_is_zero():
        raise StructuralError("transform has nonzero entries outside its support")
    r = transform
    for _ in range(transform.n):
        r = split_level(r, ledger=ledger, workers=workers)
    # level 0: section l, slope 0, offset h holds pixel (h, l)
    return Image(transform.n, r.data[:, 0, :])


def iadrt_from_full(
    full: dict, q: Quadrant | int = Quadrant.IDENTITY, ledger: CostLedger | None = None
) -> Image:
    """Reconstruct from any one quadrant of :func:`adrt_full` output."""
    q = Quadrant(q)
    if q not in full:
        raise KeyError(f"quadrant {int(q)} missing from transform")
    return invert_quadrant_symmetry(iadrt(full[q], ledger=ledger), q)


def inverse_cost(n: int) -> int:
    """Additions plus subtractions used by :func:`iadrt` on a ``2**n`` image."""
    side = 1 << n
    return sum(
        (1 << (n - m + 1)) * 2 * sum(side + s for s in range(1 << (m - 1)))
        for m in range(1, n + 1)
    )


def level_bound_cost(n: int) -> int:
    """Aggregate of the per-level ``2 * size`` operation bound."""
    return sum(
        (1 << (n - m)) * 2 * (1 << (m - 1)) * ((1 << (n + 1)) + (1 << m) + 1)
        for m in range(1, n + 1)
    )
