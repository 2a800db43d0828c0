"""Log-domain numeric helpers.

Everything in this package that can overflow a float (factorials, weight
sequence terms, vertex indices of the polygonal families) is handled here:
log-factorials with a Stirling tail, logs of arbitrarily large Python ints,
and an explicit error type for quantities that are genuinely out of float
range even after taking logs.
"""

from __future__ import annotations

import math

LOG2 = math.log(2.0)
LOG_2PI = math.log(2.0 * math.pi)

# lgamma is used verbatim up to this index; beyond it we switch to a
# Stirling expansion with one correction term (abs error < 1/(360 k^3)).
LGAMMA_EXACT_MAX = 10**6

# ints above this cannot be multiplied into a float without overflow
_FLOAT_SAFE_INT = 10**300


class UnrepresentableError(OverflowError):
    """A quantity overflows float range even in the log domain."""


def log_of_int(n: int) -> float:
    """Natural log of a positive int of arbitrary size."""
    if n <= 0:
        raise ValueError("log_of_int needs a positive integer")
    try:
        return math.log(n)
    except OverflowError:
        bits = n.bit_length()
        top = n >> (bits - 53)
        return math.log(top) + (bits - 53) * LOG2


def log_factorial(k: int) -> float:
    """log k!  Exact lgamma for k <= 10^6, Stirling beyond.

    Raises UnrepresentableError when k log k itself overflows float range.
    """
    if k < 0:
        raise ValueError("negative factorial index")
    if k <= LGAMMA_EXACT_MAX:
        return math.lgamma(k + 1)
    if k > _FLOAT_SAFE_INT:
        raise UnrepresentableError(f"log {k}! exceeds float range")
    lk = log_of_int(k)
    kf = float(k)
    return kf * (lk - 1.0) + 0.5 * (LOG_2PI + lk) + 1.0 / (12.0 * kf)


def log_factorial_over_k(k: int) -> float:
    """(log k!)/k, stable for ints far beyond float range."""
    if k <= 0:
        raise ValueError("index must be positive")
    if k <= LGAMMA_EXACT_MAX:
        return math.lgamma(k + 1) / k
    lk = log_of_int(k)
    if k > _FLOAT_SAFE_INT:
        # correction terms are < 1e-290 here
        return lk - 1.0
    kf = float(k)
    return (lk - 1.0) + (0.5 * (LOG_2PI + lk) + 1.0 / (12.0 * kf)) / kf
