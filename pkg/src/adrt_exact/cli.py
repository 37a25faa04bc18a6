"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage or dimension error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bench
from .core import AdrtError, CostLedger, DimensionError, Quadrant, apply_quadrant_symmetry
from .core import invert_quadrant_symmetry
from .dlines import adrt_direct_full, digital_line
from .fileio import read_image, read_transform, write_image, write_transform
from .forward import adrt_single_quadrant
from .inverse import iadrt, inverse_cost


class UsageError(AdrtError):
    pass


def _quadrant_path(out: Path, q: int) -> Path:
    return out.with_name(f"{out.stem}_q{q}{out.suffix}")


def cmd_forward(args) -> int:
    img = read_image(args.input, args.format)
    out = Path(args.output)
    if args.quadrant == "all":
        for q in Quadrant:
            t = adrt_single_quadrant(apply_quadrant_symmetry(img, q), workers=args.workers)
            write_transform(t, _quadrant_path(out, int(q)), q)
    else:
        q = Quadrant(int(args.quadrant))
        t = adrt_single_quadrant(apply_quadrant_symmetry(img, q), workers=args.workers)
        write_transform(t, out, q)
    return 0


def cmd_inverse(args) -> int:
    t, q = read_transform(args.input, strict=not args.lenient)
    img = iadrt(t, workers=args.workers)
    if q is not None:
        img = invert_quadrant_symmetry(img, q)
    write_image(img, args.output, args.format)
    return 0


def cmd_roundtrip(args) -> int:
    if args.input:
        img = read_image(args.input, args.format)
    elif args.n is not None:
        img = bench.random_integer_image(args.n, np.random.default_rng(args.seed))
    else:
        raise UsageError("roundtrip needs --input or --n")
    ledger = CostLedger()
    t0 = time.perf_counter()
    t = adrt_single_quadrant(img, workers=args.workers)
    t1 = time.perf_counter()
    rec = iadrt(t, ledger=ledger, workers=args.workers)
    t2 = time.perf_counter()
    report = {
        "n": img.n,
        "max_abs_err": float(np.max(np.abs(rec.values - img.values))),
        "additions": ledger.additions,
        "subtractions": ledger.subtractions,
        "total_expected": inverse_cost(img.n),
        "forward_seconds": t1 - t0,
        "inverse_seconds": t2 - t1,
    }
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n")
    else:
        print(text)
    return 0 if ledger.total == report["total_expected"] else 1


def cmd_oracle(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = 0
    for trial in range(args.trials):
        img = bench.random_integer_image(args.n, rng)
        fast = adrt_single_quadrant(img)
        slow = adrt_direct_full(img, args.n)
        diff = float(np.max(np.abs(fast.data - slow.data)))
        ok = fast == slow
        failures += not ok
        print(f"trial {trial}: n={args.n} max_abs_diff={diff:g} {'ok' if ok else 'MISMATCH'}")
    print(f"{args.trials - failures}/{args.trials} trials match")
    return 1 if failures else 0


def cmd_lines(args) -> int:
    line = digital_line(args.m, args.h, args.s)
    f = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["i", "j"])
        w.writerows(line.pixels)
    finally:
        if args.output:
            f.close()
    return 0


def cmd_bench(args) -> int:
    def progress(r):
        print(
            f"n={r.n:2d} N={r.N:9d} fwd={r.forward_seconds:.4g}s inv={r.inverse_seconds:.4g}s "
            f"ops={r.additions + r.subtractions} expected={r.expected_total} "
            f"err={r.max_abs_err:g}",
            file=sys.stderr,
        )

    records = bench.run_bench(
        args.min_n, args.max_n, args.reps, args.seed, args.workers, args.output, progress
    )
    if len(records) >= 4:
        try:
            print(json.dumps(bench.fit_scaling(records)))
        except bench.AnalysisError as exc:
            print(f"scaling fit skipped: {exc}", file=sys.stderr)
    ok = all(
        r.additions + r.subtractions == r.expected_total and r.max_abs_err == 0
        for r in records
    )
    return 0 if ok else 1


def _int_in(lo, hi):
    def parse(text):
        v = int(text)
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{v} outside {lo}..{hi}")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adrt-exact", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", help="single-quadrant transform of an image")
    f.add_argument("--input", required=True)
    f.add_argument("--output", required=True)
    f.add_argument("--quadrant", choices=["0", "1", "2", "3", "all"], default="0")
    f.add_argument("--format", choices=["pgm", "csv", "raw"])
    f.add_argument("--workers", type=_int_in(1, 1024), default=1)
    f.set_defaults(func=cmd_forward)

    i = sub.add_parser("inverse", help="reconstruct an image from a transform file")
    i.add_argument("--input", required=True)
    i.add_argument("--output", required=True)
    i.add_argument("--format", choices=["pgm", "csv", "raw"])
    i.add_argument("--lenient", action="store_true", help="warn on nonzero padding")
    i.add_argument("--workers", type=_int_in(1, 1024), default=1)
    i.set_defaults(func=cmd_inverse)

    r = sub.add_parser("roundtrip", help="forward + inverse with a JSON report")
    r.add_argument("--input")
    r.add_argument("--format", choices=["pgm", "csv", "raw"])
    r.add_argument("--n", type=_int_in(0, 12), help="use a seeded random image instead")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--report")
    r.add_argument("--workers", type=_int_in(1, 1024), default=1)
    r.set_defaults(func=cmd_roundtrip)

    o = sub.add_parser("oracle", help="fast transform vs brute-force line sums")
    o.add_argument("--n", type=_int_in(0, 6), required=True)
    o.add_argument("--trials", type=_int_in(1, 10**6), default=5)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    ln = sub.add_parser("lines", help="dump the pixels of a digital line as CSV")
    ln.add_argument("--m", type=_int_in(0, 20), required=True)
    ln.add_argument("--h", type=int, required=True)
    ln.add_argument("--s", type=int, required=True)
    ln.add_argument("--output")
    ln.set_defaults(func=cmd_lines)

    b = sub.add_parser("bench", help="timing and operation-count sweep")
    b.add_argument("--min-n", type=_int_in(1, 12), default=1)
    b.add_argument("--max-n", type=_int_in(1, 12), default=9)
    b.add_argument("--reps", type=_int_in(3, 1000), default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--workers", type=_int_in(1, 1024))
    b.add_argument("--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "lines" and not 0 <= args.s < (1 << args.m):
        parser.error(f"--s must be in 0..{(1 << args.m) - 1} for --m {args.m}")
    if args.command == "bench" and args.min_n > args.max_n:
        parser.error("--min-n must not exceed --max-n")
    try:
        return args.func(args)
    except (DimensionError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AdrtError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
