from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def blocks(num_sections: int, num_slopes: int, workers: int):
    """Split a (section, slope) grid into at most ``workers`` rectangular blocks.

    Sections are split first; slopes only when there are fewer sections
    than workers. Yields ``(sec_lo, sec_hi, slope_lo, slope_hi)``.
    """
    workers = max(1, workers)
    if workers == 1:
        yield 0, num_sections, 0, num_slopes
        return
    sec_parts = min(workers, num_sections)
    slope_parts = max(1, min(workers // sec_parts, num_slopes))
    for a in range(sec_parts):
        s_lo, s_hi = a * num_sections // sec_parts, (a + 1) * num_sections // sec_parts
        for b in range(slope_parts):
            yield (
                s_lo,
                s_hi,
                b * num_slopes // slope_parts,
                (b + 1) * num_slopes // slope_parts,
            )


def run_blocks(fn, num_sections: int, num_slopes: int, workers: int) -> None:
    """Call ``fn(sec_lo, sec_hi, slope_lo, slope_hi)`` over all blocks."""
    parts = list(blocks(num_sections, num_slopes, workers))
    if len(parts) == 1:
        fn(*parts[0])
        return
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        for fut in [pool.submit(fn, *p) for p in parts]:
            fut.result()
