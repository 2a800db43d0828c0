"""Hot numeric kernels with an optional numba fast path.

Set ULTRADIFF_NO_NUMBA=1 to force the pure-numpy implementations; the
dispatch is resolved once at import.  Both paths compute identical values
(same loop order, same float operations).
"""

from __future__ import annotations

import os

import numpy as np

_USE_NUMBA = os.environ.get("ULTRADIFF_NO_NUMBA", "") not in ("1", "true", "yes")

if _USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        _USE_NUMBA = False


def _mcirc_numpy(log_m: np.ndarray) -> np.ndarray:
    """log M°_k for k = 0..K by the two-stage max-plus dynamic program.

    Stage 1: b[j, k] = max over compositions of k into j positive parts of
    sum log M_{alpha_i}, via b[j, k] = max_a (log M_a + b[j-1, k-a]).
    Stage 2: log M°_k = max_j (log M_j + b[j, k]).
    """
    K = log_m.size - 1
    NEG = -np.inf
    b = np.full((K + 1, K + 1), NEG)
    b[0, 0] = 0.0
    for j in range(1, K + 1):
        prev = b[j - 1]
        # b[j, k] = max_{1 <= a <= k-j+1} log_m[a] + prev[k-a]
        for k in range(j, K + 1):
            best = NEG
            for a in range(1, k - j + 2):
                v = log_m[a] + prev[k - a]
                if v > best:
                    best = v
            b[j, k] = best
    out = np.zeros(K + 1)
    for k in range(1, K + 1):
        best = NEG
        for j in range(1, k + 1):
            v = log_m[j] + b[j, k]
            if v > best:
                best = v
        out[k] = best
    return out


if _USE_NUMBA:
    _mcirc_fast = njit(cache=True)(_mcirc_numpy)
else:
    _mcirc_fast = _mcirc_numpy


def _mcirc_numpy_vec(log_m: np.ndarray) -> np.ndarray:
    """Vectorized fallback: same recurrence, rows maxed with numpy."""
    K = log_m.size - 1
    b = np.full((K + 1, K + 1), -np.inf)
    b[0, 0] = 0.0
    for j in range(1, K + 1):
        prev = b[j - 1]
        for k in range(j, K + 1):
            a = np.arange(1, k - j + 2)
            b[j, k] = np.max(log_m[a] + prev[k - a])
    out = np.zeros(K + 1)
    for k in range(1, K + 1):
        j = np.arange(1, k + 1)
        out[k] = np.max(log_m[j] + b[j, k])
    return out


def mcirc_log(log_m: np.ndarray) -> np.ndarray:
    """Dispatch to the compiled kernel or the numpy fallback."""
    log_m = np.ascontiguousarray(log_m, dtype=np.float64)
    if _USE_NUMBA:
        return _mcirc_fast(log_m)
    return _mcirc_numpy_vec(log_m)


def using_numba() -> bool:
    return _USE_NUMBA
