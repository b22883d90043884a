"""Compare the compiled and pure-Python row-reduction kernels.

Times the integer Gauss-Jordan elimination on seeded random matrices of
increasing size, verifies both backends produce identical pivots and rows,
and prints a small table.  Run as ``python benchmarks/bench_rref.py``.
"""

import copy
import random
import time

from toricbundle._kernels import BACKEND
from toricbundle._kernels._gj_py import gauss_jordan_int as gj_py

try:
    from toricbundle._kernels._gj_cy import gauss_jordan_int as gj_cy
except ImportError:
    gj_cy = None


def random_matrix(rng, rows, cols, span):
    return [[rng.randint(-span, span) for _ in range(cols)] for _ in range(rows)]


def bench(fn, rows, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        work = copy.deepcopy(rows)
        t0 = time.perf_counter()
        fn(work)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = random.Random(20240317)
    print(f"active backend: {BACKEND}")
    if gj_cy is None:
        print("compiled kernel not built; showing pure-Python timings only")
    header = f"{'shape':>12} {'entries':>8} {'python':>10}"
    if gj_cy:
        header += f" {'cython':>10} {'speedup':>8}"
    print(header)
    for rows, cols, span in [
        (20, 20, 9),
        (50, 50, 9),
        (100, 100, 9),
        (150, 150, 99),
        (200, 220, 9),
    ]:
        m = random_matrix(rng, rows, cols, span)
        check_py = copy.deepcopy(m)
        piv_py = gj_py(check_py)
        t_py = bench(gj_py, m)
        line = f"{rows}x{cols:>5} {f'+-{span}':>8} {t_py * 1e3:9.2f}ms"
        if gj_cy:
            check_cy = copy.deepcopy(m)
            piv_cy = gj_cy(check_cy)
            assert piv_py == piv_cy and check_py == check_cy, "backends differ"
            t_cy = bench(gj_cy, m)
            line += f" {t_cy * 1e3:9.2f}ms {t_py / t_cy:7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
