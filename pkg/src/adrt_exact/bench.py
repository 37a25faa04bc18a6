"""Timing and operation-count sweeps over image sizes."""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import astuple, dataclass, fields

import numpy as np

from ._parallel import default_workers
from .core import AdrtError, CostLedger, Image
from .forward import adrt_single_quadrant
from .inverse import iadrt, inverse_cost

TRUNCATED = "TRUNCATED"


class AnalysisError(AdrtError, ValueError):
    pass


@dataclass
class BenchRecord:
    n: int
    N: int
    forward_seconds: float
    inverse_seconds: float
    forward_seconds_parallel: float
    inverse_seconds_parallel: float
    workers: int
    additions: int
    subtractions: int
    expected_total: int
    max_abs_err: float
    repetitions: int


def random_integer_image(n: int, rng: np.random.Generator, high: int = 65536) -> Image:
    side = 1 << n
    return Image(n, rng.integers(0, high, size=(side, side)).astype(np.float64))


def _median_time(fn, reps: int) -> float:
    fn()  # warm-up, discarded
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_one(n: int, reps: int, rng: np.random.Generator, workers: int) -> BenchRecord:
    img = random_integer_image(n, rng)

    serial = CostLedger()
    fwd = adrt_single_quadrant(img)
    rec = iadrt(fwd, ledger=serial)
    parallel = CostLedger()
    fwd_par = adrt_single_quadrant(img, workers=workers)
    rec_par = iadrt(fwd_par, ledger=parallel, workers=workers)
    if fwd_par != fwd or rec_par != rec or parallel.total != serial.total:
        raise AssertionError(f"parallel run differs from serial run at n={n}")

    return BenchRecord(
        n=n,
        N=4**n,
        forward_seconds=_median_time(lambda: adrt_single_quadrant(img), reps),
        inverse_seconds=_median_time(lambda: iadrt(fwd), reps),
        forward_seconds_parallel=_median_time(
            lambda: adrt_single_quadrant(img, workers=workers), reps
        ),
        inverse_seconds_parallel=_median_time(lambda: iadrt(fwd, workers=workers), reps),
        workers=workers,
        additions=serial.additions,
        subtractions=serial.subtractions,
        expected_total=inverse_cost(n),
        max_abs_err=float(np.max(np.abs(rec.values - img.values))),
        repetitions=reps,
    )


def run_bench(
    min_n: int,
    max_n: int,
    reps: int = 3,
    seed: int = 0,
    workers: int | None = None,
    output=None,
    progress=None,
) -> list:
    """Benchmark every ``n`` in ``min_n..max_n`` on seeded integer images.

    If ``output`` is given, records are written there as CSV. A
    ``MemoryError`` stops the sweep; the CSV then ends with a row whose
    first field is ``TRUNCATED`` followed by the failing ``n``.
    """
    if not 1 <= min_n <= max_n <= 12:
        raise ValueError(f"need 1 <= min_n <= max_n <= 12, got {min_n}, {max_n}")
    if reps < 3:
        raise ValueError("at least 3 repetitions are required")
    workers = workers or default_workers()
    rng = np.random.default_rng(seed)
    records = []
    truncated_at = None
    for n in range(min_n, max_n + 1):
        try:
            records.append(bench_one(n, reps, rng, workers))
        except MemoryError:
            truncated_at = n
            break
        if progress:
            progress(records[-1])
    if output is not None:
        write_records(records, output, truncated_at)
    return records


def write_records(records, path, truncated_at: int | None = None) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow([fld.name for fld in fields(BenchRecord)])
        for r in records:
            w.writerow(astuple(r))
        if truncated_at is not None:
            w.writerow([TRUNCATED, truncated_at])


def fit_scaling(records) -> dict:
    """Least-squares slope of log(time) against log(N).

    Returns ``{"forward": slope, "inverse": slope}``. Needs at least four
    records whose ``N`` spans a factor of 8 or more.
    """
    records = list(records)
    if len(records) < 4:
        raise AnalysisError(f"need at least 4 records, got {len(records)}")
    sizes = np.array([r.N for r in records], dtype=float)
    if sizes.max() / sizes.min() < 8:
        raise AnalysisError("records must span at least 3 octaves of N")
    x = np.log(sizes)
    out = {}
    for key in ("forward", "inverse"):
        y = np.log([getattr(r, f"{key}_seconds") for r in records])
        out[key] = float(np.polyfit(x, y, 1)[0])
    return out
