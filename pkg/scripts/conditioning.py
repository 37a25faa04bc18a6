"""Singular values of the single-quadrant transform as a dense matrix.

Shows how fast the smallest singular value decays with n, and the
float64 roundtrip error on uniform [0, 1) images for comparison.

    python scripts/conditioning.py --max-n 6
"""

import argparse

import numpy as np

from adrt_exact import Image, adrt_single_quadrant, iadrt, image_from_values


def transform_matrix(n):
    cols = []
    for k in range(4**n):
        e = np.zeros(4**n)
        e[k] = 1.0
        cols.append(adrt_single_quadrant(image_from_values(n, e)).data.ravel())
    return np.array(cols).T


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'n':>2} {'sigma_max':>10} {'sigma_min':>10} {'cond':>10} {'roundtrip_err':>14}")
    for n in range(1, args.max_n + 1):
        sv = np.linalg.svd(transform_matrix(n), compute_uv=False)
        img = Image.from_array(rng.random((1 << n, 1 << n)))
        err = np.max(np.abs(iadrt(adrt_single_quadrant(img)).values - img.values))
        print(f"{n:>2} {sv[0]:10.4g} {sv[-1]:10.4g} {sv[0] / sv[-1]:10.4g} {err:14.4g}")
    for n in range(args.max_n + 1, 9):
        img = Image.from_array(rng.random((1 << n, 1 << n)))
        err = np.max(np.abs(iadrt(adrt_single_quadrant(img)).values - img.values))
        print(f"{n:>2} {'':>10} {'':>10} {'':>10} {err:14.4g}")


if __name__ == "__main__":
    main()
