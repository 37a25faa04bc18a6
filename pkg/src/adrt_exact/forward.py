"""Fast single-quadrant transform by bottom-up merging of sections."""

from __future__ import annotations

import numpy as np

from ._parallel import run_blocks
from .core import (
    CostLedger,
    Image,
    Quadrant,
    SectionedTransform,
    StructuralError,
    apply_quadrant_symmetry,
    buffer_width,
    support_mask,
)


def adrt_init(img: Image) -> SectionedTransform:
    """Level-0 stack: section ``l`` is image row ``l`` at slope 0."""
    return SectionedTransform(img.n, 0, img.values[:, None, :])


def _merge_block(lower: np.ndarray, out: np.ndarray, n: int, m: int, sigma: np.ndarray):
    # lower: (2S, T, Wl) for S output sections; out: (S, len(sigma), W)
    half = 1 << (m - 1)
    width = buffer_width(n, m)
    lo_w = lower.shape[2]
    s = sigma >> 1
    odd_bit = sigma & 1
    p = np.arange(width)

    # upper half enters at the same physical offset
    top = np.zeros((lower.shape[0] // 2, half, width))
    top[:, :, :lo_w] = lower[1::2]
    # lower half is read at p - s - odd_bit; left pad keeps indices >= 0
    pad = 2 * half
    bottom = np.zeros((lower.shape[0] // 2, half, width + pad))
    bottom[:, :, pad : pad + lo_w] = lower[0::2]
    idx = p[None, :] - s[:, None] - odd_bit[:, None] + pad

    res = bottom[:, s[:, None], idx] + top[:, s, :]
    mask = p[None, :] < (1 << n) + sigma[:, None]
    res[:, ~mask] = 0.0
    out[...] = res


def merge_level(
    lower: SectionedTransform,
    ledger: CostLedger | None = None,
    workers: int = 1,
) -> SectionedTransform:
    """Combine pairs of level ``m-1`` sections into level ``m``.

    For output section ``l``::

        R_m(l, h, 2s)   = R_{m-1}(2l, h, s) + R_{m-1}(2l+1, h+s,   s)
        R_m(l, h, 2s+1) = R_{m-1}(2l, h, s) + R_{m-1}(2l+1, h+s+1, s)

    One addition is counted per entry in the output support.
    """
    n, m = lower.n, lower.m + 1
    if m > n:
        raise StructuralError(f"cannot merge past level n={n}")
    if lower.num_sections != 1 << (n - m + 1):
        raise StructuralError("lower stack has the wrong number of sections")
    out = np.zeros((1 << (n - m), 1 << m, buffer_width(n, m)))
    src = lower.data

    def work(a, b, lo, hi):
        _merge_block(src[2 * a : 2 * b], out[a:b, lo:hi], n, m, np.arange(lo, hi))

    run_blocks(work, out.shape[0], out.shape[1], workers)
    if ledger is not None:
        ledger.record(m, additions=out.shape[0] * int(support_mask(n, m).sum()))
    return SectionedTransform(n, m, out)


def adrt_single_quadrant(
    img: Image, ledger: CostLedger | None = None, workers: int = 1
) -> SectionedTransform:
    """Single-quadrant transform at level ``n`` (one section)."""
    r = adrt_init(img)
    for _ in range(img.n):
        r = merge_level(r, ledger=ledger, workers=workers)
    return r


def adrt_full(img: Image, workers: int = 1) -> dict:
    """Transform of all four symmetry images, keyed by :class:`Quadrant`."""
    return {
        q: adrt_single_quadrant(apply_quadrant_symmetry(img, q), workers=workers)
        for q in Quadrant
    }


def forward_cost(n: int) -> int:
    """Additions used by :func:`adrt_single_quadrant` on a ``2**n`` image."""
    side = 1 << n
    return sum(
        (1 << (n - m)) * sum(side + s for s in range(1 << m)) for m in range(1, n + 1)
    )
