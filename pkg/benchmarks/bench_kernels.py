"""Benchmark the compiled subset-sum bitmap kernel against the pure-Python one.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 4096,65536,1048576] [--k 24]
                                        [--reps 20] [--seed 0]

Prints one line per group size with the median wall time of each backend and
the speedup ratio.  Exits nonzero if the compiled extension is unavailable or
if the two backends ever disagree on an instance.
"""

import argparse
import random
import statistics
import sys
import time

from sumcover.coverage import _sigma_bits_cyclic_py

try:
    from sumcover import _core
except ImportError:
    _core = None


def bench_one(n, k, reps, rng):
    import numpy as np

    t_c, t_py = [], []
    for _ in range(reps):
        shifts = [rng.randrange(1, n) for _ in range(k)]
        arr = np.asarray(shifts, dtype=np.int64)

        t0 = time.perf_counter()
        raw, pc = _core.sigma_bits_cyclic(n, arr)
        t_c.append(time.perf_counter() - t0)
        bits_c = int.from_bytes(raw, "little")

        t0 = time.perf_counter()
        bits_py, pc_py = _sigma_bits_cyclic_py(n, shifts)
        t_py.append(time.perf_counter() - t0)

        if bits_c != bits_py or pc != pc_py:
            raise SystemExit(f"backend mismatch at n={n}, shifts={shifts}")
    return statistics.median(t_c), statistics.median(t_py)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4096,65536,1048576")
    ap.add_argument("--k", type=int, default=24)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _core is None:
        print("compiled extension not available; nothing to compare", file=sys.stderr)
        return 1

    rng = random.Random(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'n':>9}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for n in sizes:
        tc, tp = bench_one(n, args.k, args.reps, rng)
        print(f"{n:>9}  {tc * 1e3:>8.3f}ms  {tp * 1e3:>8.3f}ms  {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
