"""Benchmark: compiled kernel vs pure-numpy fallback for the max-plus DP.

Run as:  python benchmarks/bench_mcirc.py [K ...]

Reports wall time per call for both code paths at each truncation.  The
compiled path is skipped cleanly when numba is unavailable or disabled
via ULTRADIFF_NO_NUMBA.
"""

import sys
import time

import numpy as np

from ultradiff._kernels import (_mcirc_numpy_vec, _mcirc_fast, mcirc_log,
                                using_numba)


def time_call(fn, arg, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(arg)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    sizes = [int(a) for a in sys.argv[1:]] or [64, 128, 256, 512]
    print(f"numba available and enabled: {using_numba()}")
    print(f"{'K':>6} {'numpy (s)':>12} {'compiled (s)':>14} {'speedup':>9}")
    for K in sizes:
        log_m = np.cumsum(np.log1p(np.linspace(0.1, 2.0, K + 1)))
        log_m[0] = 0.0
        t_np = time_call(_mcirc_numpy_vec, log_m)
        if using_numba():
            _mcirc_fast(log_m)  # warm the JIT cache before timing
            t_nb = time_call(_mcirc_fast, log_m)
            print(f"{K:>6} {t_np:>12.4f} {t_nb:>14.4f} {t_np / t_nb:>8.1f}x")
        else:
            print(f"{K:>6} {t_np:>12.4f} {'-':>14} {'-':>9}")
        ref = _mcirc_numpy_vec(log_m)
        assert np.allclose(mcirc_log(log_m), ref, atol=1e-12, rtol=0)


if __name__ == "__main__":
    main()
