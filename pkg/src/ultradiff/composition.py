"""Composition-stability machinery.

M°_k = max over j >= 1 and compositions (a_1, ..., a_j) of k into positive
parts of M_j * M_{a_1} * ... * M_{a_j}.  The class is stable under
composition exactly when M°_k <= C^k M_k for some C; the checker probes
that statistic on the checkpoint grid.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._kernels import mcirc_log
from .config import RunConfig, DEFAULT_CONFIG, checkpoints
from .sequences import WeightSequence
from .verdicts import Verdict, bounded_verdict


def m_circ_dp(seq: WeightSequence, K: Optional[int] = None,
              cfg: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """log M°_k for k = 0..K by dynamic programming (O(K^3))."""
    K = seq.K if K is None else K
    if K > cfg.dp_cap:
        raise ValueError(
            f"K={K} exceeds dp_cap={cfg.dp_cap}; raise the cap explicitly "
            "if the cubic cost is acceptable")
    if K > seq.K:
        raise ValueError("K exceeds the dense prefix")
    return mcirc_log(seq.log_terms[:K + 1])


def m_circ_exact(values: Sequence[Fraction], K: Optional[int] = None) -> list[Fraction]:
    """M°_k as exact rationals; values[k] = M_k, values[0] must be 1."""
    vals = [Fraction(v) for v in values]
    K = len(vals) - 1 if K is None else K
    if K > 64:
        raise ValueError("exact mode is intended for small K (<= 64)")
    if vals[0] != 1:
        raise ValueError("M_0 must equal 1")
    if any(v <= 0 for v in vals):
        raise ValueError("terms must be positive")
    # b[j][k] = max product over compositions of k into j positive parts
    b = [[None] * (K + 1) for _ in range(K + 1)]
    b[0][0] = Fraction(1)
    for j in range(1, K + 1):
        for k in range(j, K + 1):
            best = None
            for a in range(1, k - j + 2):
                prev = b[j - 1][k - a]
                if prev is None:
                    continue
                v = vals[a] * prev
                if best is None or v > best:
                    best = v
            b[j][k] = best
    out = [Fraction(1)]
    for k in range(1, K + 1):
        out.append(max(vals[j] * b[j][k] for j in range(1, k + 1)))
    return out


def _compositions(k: int):
    """All compositions of k into positive parts, lexicographic order."""
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in _compositions(k - first):
            yield (first,) + rest


def m_circ_bruteforce(values: Sequence, k: int) -> tuple[object, tuple[int, tuple[int, ...]]]:
    """(M°_k, witness) by enumerating all 2^(k-1) compositions.

    The witness is the lexicographically smallest (j, alpha) attaining the
    max.  Works on Fractions (exact) or floats.
    """
    if k > 14:
        raise ValueError("brute force limited to k <= 14")
    if k == 0:
        return (values[0] ** 0, (0, ()))
    best = None
    best_wit = None
    for alpha in _compositions(k):
        j = len(alpha)
        v = values[j]
        for a in alpha:
            v = v * values[a]
        wit = (j, alpha)
        if best is None or v > best or (v == best and wit < best_wit):
            best, best_wit = v, wit
    return best, best_wit


def check_fdb_property(seq: WeightSequence, cfg: RunConfig = DEFAULT_CONFIG,
                       K: Optional[int] = None) -> Verdict:
    """Composition stability: (M°_k / M_k)^(1/k) bounded."""
    K = min(seq.K, cfg.dp_cap) if K is None else K
    if K < 8:
        raise ValueError("need K >= 8")
    log_mc = m_circ_dp(seq, K, cfg)
    k = np.arange(1, K + 1)
    stat = np.exp((log_mc[1:] - seq.log_terms[1:K + 1]) / k)
    sups = np.maximum.accumulate(stat)
    pts = [(c, float(sups[c - 1])) for c in checkpoints(K, cfg)]
    return bounded_verdict(pts, K, cfg, note="composition excess")


def n_beta_coefficients(k: int) -> dict[tuple[int, ...], int]:
    """Coefficients N(beta) of prod_{j=1..k} (t_1 + ... + t_j), exact ints.

    Keys are exponent vectors beta of length k with sum k; the values sum
    to k!.
    """
    if not 1 <= k <= 9:
        raise ValueError("k must be in 1..9 (coefficients grow like k!)")
    poly: dict[tuple[int, ...], int] = {(0,) * k: 1}
    for j in range(1, k + 1):
        nxt: dict[tuple[int, ...], int] = {}
        for beta, c in poly.items():
            for ell in range(j):
                key = beta[:ell] + (beta[ell] + 1,) + beta[ell + 1:]
                nxt[key] = nxt.get(key, 0) + c
        poly = nxt
    return poly


def n_beta_total(k: int) -> int:
    return sum(n_beta_coefficients(k).values())


def log_items(values: Sequence) -> np.ndarray:
    """log of a positive sequence, Fractions included."""
    out = np.empty(len(values))
    for i, v in enumerate(values):
        f = Fraction(v)
        out[i] = math.log(f.numerator) - math.log(f.denominator)
    return out
