"""Compare the numba kernels with the numpy fallbacks.

    python benchmarks/bench_kernels.py [--R 6] [--repeat 3]

Both backends run on the same arrays; results must be identical.  The
first numba call includes compilation (or loading from the on-disk cache),
so it is reported separately.
"""

import argparse
import time

import numpy as np

from relrips.cayley import build_ball
from relrips.coned import build_coned_ball
from relrips.kernels import _numpy

try:
    from relrips.kernels import _numba
except ImportError:  # numba missing
    _numba = None

from relrips.presentation import load_presentation


def best_of(fn, args, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixture", default="f2_rel_a")
    ap.add_argument("--R", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    pres, k = load_presentation(args.fixture)
    ball = build_ball(pres, args.R)
    cb = build_coned_ball(ball, k)
    csr = ball.csr
    arrays = cb.kernel_arrays()
    D = cb.tables[0] if _numba is None else _numba.coned_tables(*arrays)[0]
    rng = np.random.default_rng(0)
    idx = np.sort(rng.choice(len(ball), size=min(60, len(ball)), replace=False)).astype(np.int64)
    quads = rng.integers(0, len(ball), size=(200_000, 4)).astype(np.int64)

    jobs = [
        ("all_pairs_bfs", (csr[0], csr[1])),
        ("coned_tables", arrays),
        ("four_point_max", (D, idx)),
        ("four_point_quads", (D, quads)),
    ]
    print(f"{args.fixture} R={args.R}: {len(ball)} vertices")
    print(f"{'kernel':18s} {'numpy':>10s} {'numba':>10s} {'first jit':>10s} {'speedup':>8s}")
    for name, a in jobs:
        t_np, r_np = best_of(getattr(_numpy, name), a, args.repeat)
        if _numba is None:
            print(f"{name:18s} {t_np:10.4f} {'-':>10s} {'-':>10s} {'-':>8s}")
            continue
        t_first, _ = best_of(getattr(_numba, name), a, 1)
        t_nb, r_nb = best_of(getattr(_numba, name), a, args.repeat)
        flag = "" if same(r_np, r_nb) else "  MISMATCH"
        print(f"{name:18s} {t_np:10.4f} {t_nb:10.4f} {t_first:10.4f} {t_np / t_nb:8.1f}x{flag}")


if __name__ == "__main__":
    main()
