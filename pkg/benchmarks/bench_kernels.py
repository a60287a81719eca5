"""Compare the compiled enumeration/prefilter kernels with the pure-Python
fallback on identical workloads, and check that their outputs agree.

Run:  python benchmarks/bench_kernels.py [bound]
"""

import math
import sys
import time

from linscat import _pykernels, kernels


def bench(label, fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    print("%-28s %8.3f s" % (label, best))
    return result, best


def main():
    bound = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    if not kernels.USING_COMPILED:
        print("compiled kernels unavailable; benchmarking pure Python only")
    print("bound =", bound)

    r1, t1 = bench("enum_p1 (active)", kernels.enum_p1, bound)
    r2, t2 = bench("enum_p1 (pure)", _pykernels.enum_p1, bound)
    assert r1 == r2, "enum_p1 mismatch"
    if kernels.USING_COMPILED:
        print("  speedup %.1fx, %d points" % (t2 / t1, len(r1)))

    sqrt2 = math.sqrt(2.0)
    coeffs = [(-sqrt2, 1.0), (1.0, 0.0)]
    r1, t1 = bench("prefilter_p1 (active)", kernels.prefilter_p1,
                   bound, coeffs, -0.3, 0.0)
    r2, t2 = bench("prefilter_p1 (pure)", _pykernels.prefilter_p1,
                   bound, coeffs, -0.3, 0.0)
    assert r1 == r2, "prefilter_p1 mismatch"
    if kernels.USING_COMPILED:
        print("  speedup %.1fx, %d candidates" % (t2 / t1, len(r1)))

    b2 = max(bound // 20, 30)
    coeffs3 = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (-sqrt2, 0.0, 1.0)]
    r1, t1 = bench("prefilter_p2 (active)", kernels.prefilter_p2,
                   b2, coeffs3, -0.3, 0.0)
    r2, t2 = bench("prefilter_p2 (pure)", _pykernels.prefilter_p2,
                   b2, coeffs3, -0.3, 0.0)
    assert r1 == r2, "prefilter_p2 mismatch"
    if kernels.USING_COMPILED:
        print("  speedup %.1fx, %d candidates (bound %d)" % (t2 / t1, len(r1), b2))


if __name__ == "__main__":
    main()
