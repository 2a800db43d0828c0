"""Truncated Taylor jets with exact rational arithmetic.

A jet stores c_0..c_K with c_k = f^(k)(0)/k!.  Exact mode keeps Fractions
throughout, which makes the jets usable as ground truth for every bound
generator: dominance of a certificate over a jet is checked against values
with no rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .composition import _compositions
from .logutil import log_of_int

Number = Union[Fraction, float]


@dataclass(frozen=True)
class Jet:
    coefficients: tuple
    mode: str = "exact"  # "exact" | "float"

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("a jet needs at least the constant term")
        if self.mode == "exact":
            object.__setattr__(self, "coefficients",
                               tuple(Fraction(c) for c in self.coefficients))
        elif self.mode == "float":
            object.__setattr__(self, "coefficients",
                               tuple(float(c) for c in self.coefficients))
        else:
            raise ValueError("mode must be exact or float")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Number:
        return self.coefficients[k]

    def truncated(self, K: int) -> "Jet":
        return Jet(self.coefficients[:K + 1], self.mode)

    def derivative_values(self) -> list:
        """f^(k)(0) = c_k * k!."""
        return [c * math.factorial(k) for k, c in enumerate(self.coefficients)]

    def float_coefficients(self) -> list[float]:
        return [float(c) for c in self.coefficients]

    def log_derivatives(self) -> list[float]:
        """log |f^(k)(0)|, -inf for zero entries; exact-friendly."""
        out = []
        for k, c in enumerate(self.coefficients):
            f = Fraction(c)
            if f == 0:
                out.append(-math.inf)
                continue
            num, den = abs(f.numerator), f.denominator
            out.append(log_of_int(num) - log_of_int(den)
                       + math.lgamma(k + 1))
        return out

    def coefficient_bits(self) -> int:
        """Largest numerator/denominator bit size (exact mode health stat)."""
        bits = 1
        for c in self.coefficients:
            f = Fraction(c)
            bits = max(bits, f.numerator.bit_length(), f.denominator.bit_length())
        return bits


def jet_from_function(derivs: Sequence, mode: str = "exact") -> Jet:
    """Jet from raw derivative values f^(k)(0)."""
    coeffs = [Fraction(d) / math.factorial(k) if mode == "exact"
              else float(d) / math.factorial(k)
              for k, d in enumerate(derivs)]
    return Jet(tuple(coeffs), mode)


def exp_jet(K: int) -> Jet:
    return Jet(tuple(Fraction(1, math.factorial(k)) for k in range(K + 1)))


def geometric_jet(K: int) -> Jet:
    """Jet of 1/(1 - t)."""
    return Jet(tuple(Fraction(1) for _ in range(K + 1)))


def identity_jet(K: int) -> Jet:
    return Jet(tuple(Fraction(int(k == 1)) for k in range(K + 1)))


def zero_jet(K: int) -> Jet:
    return Jet(tuple(Fraction(0) for _ in range(K + 1)))


def _common(a: Jet, b: Jet) -> tuple[int, str]:
    K = min(a.order, b.order)
    mode = "float" if "float" in (a.mode, b.mode) else "exact"
    return K, mode


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product, truncated to the common order."""
    K, mode = _common(a, b)
    out = []
    for k in range(K + 1):
        out.append(sum(a[i] * b[k - i] for i in range(k + 1)))
    return Jet(tuple(out), mode)


def jet_add(a: Jet, b: Jet) -> Jet:
    K, mode = _common(a, b)
    return Jet(tuple(a[k] + b[k] for k in range(K + 1)), mode)


def jet_scale(a: Jet, s) -> Jet:
    return Jet(tuple(c * s for c in a.coefficients), a.mode)


def jet_reciprocal(a: Jet) -> Jet:
    """1/a from the recursion a * (1/a) = 1; needs a[0] != 0."""
    if a[0] == 0:
        raise ZeroDivisionError("reciprocal of a jet with zero constant term")
    inv = [1 / a[0] if a.mode == "float" else Fraction(1) / a[0]]
    for k in range(1, a.order + 1):
        s = sum(a[i] * inv[k - i] for i in range(1, k + 1))
        inv.append(-s / a[0])
    return Jet(tuple(inv), a.mode)


def jet_compose(f: Jet, g: Jet) -> Jet:
    """f(g(t)) by Horner accumulation; g must have zero constant term."""
    if g[0] != 0:
        raise ValueError("inner jet must vanish at 0 (re-center first)")
    K, mode = _common(f, g)
    zero = 0.0 if mode == "float" else Fraction(0)
    acc = [zero] * (K + 1)
    acc[0] = f[K]
    for n in range(K - 1, -1, -1):
        # acc <- acc * g + f[n]
        nxt = [zero] * (K + 1)
        for i in range(K + 1):
            if acc[i] == 0:
                continue
            for j in range(1, K + 1 - i):
                nxt[i + j] += acc[i] * g[j]
        nxt[0] += f[n]
        acc = nxt
    return Jet(tuple(acc), mode)


def jet_compose_bruteforce(f: Jet, g: Jet) -> Jet:
    """f(g(t)) as the explicit sum over compositions, for cross-checking.

    [t^k] f(g) = sum over compositions (a_1..a_j) of k of
    f_j * g_{a_1} * ... * g_{a_j}; exponential in k, keep K small.
    """
    if g[0] != 0:
        raise ValueError("inner jet must vanish at 0")
    K, mode = _common(f, g)
    if K > 14:
        raise ValueError("brute-force composition limited to order 14")
    out = [f[0]]
    for k in range(1, K + 1):
        tot = 0 if mode == "float" else Fraction(0)
        for alpha in _compositions(k):
            j = len(alpha)
            term = f[j]
            for a in alpha:
                term = term * g[a]
            tot += term
        out.append(tot)
    return Jet(tuple(out), mode)


def jet_functional_inverse(f: Jet) -> Jet:
    """g with f(g(t)) = t to the jet order; needs f[0] = 0, f[1] != 0.

    Coefficients are produced order by order: the t^n coefficient of
    f(g) depends on g_n only through f_1 * g_n, so each new coefficient
    is solved linearly.
    """
    if f[0] != 0:
        raise ValueError("inverse needs f(0) = 0")
    if f[1] == 0:
        raise ValueError("inverse needs f'(0) != 0")
    K = f.order
    mode = f.mode
    zero = 0.0 if mode == "float" else Fraction(0)
    g = [zero, (1 / f[1]) if mode == "float" else Fraction(1) / f[1]]
    for n in range(2, K + 1):
        probe = Jet(tuple(g + [zero]), mode)
        err = jet_compose(f.truncated(n), probe.truncated(n))[n]
        g.append(-err / f[1])
    return Jet(tuple(g), mode)


def jet_ode_solve(field: Sequence[Sequence], x0, K: int,
                  mode: str = "exact") -> Jet:
    """Solution jet of x'(t) = f(x(t), t), x(0) = x0.

    `field[a][b]` is the coefficient of (x - x0)^a t^b.  The standard
    recursion: c_{k+1} = [t^k] f(x(t), t) / (k + 1).
    """
    conv = float if mode == "float" else Fraction
    zero = conv(0)
    F = [[conv(c) for c in row] for row in field]
    c = [conv(x0)] + [zero] * K
    for k in range(K):
        # u = x - x0 known through order k; need [t^k] of sum F[a][b] u^a t^b
        val = zero
        # powers of u up to the needed degree, truncated at order k
        u = c[:k + 1]
        u[0] = zero
        pw = [zero] * (k + 1)
        pw[0] = conv(1)
        for a, row in enumerate(F):
            if a > 0:
                nxt = [zero] * (k + 1)
                for i in range(k + 1):
                    if pw[i] == 0:
                        continue
                    for j in range(1, k + 1 - i):
                        nxt[i + j] += pw[i] * u[j]
                pw = nxt
                if all(x == 0 for x in pw):
                    break
            for b, fab in enumerate(row):
                if fab == 0 or b > k:
                    continue
                if k - b <= k and pw[k - b] != 0:
                    val += fab * pw[k - b]
        c[k + 1] = val / (k + 1)
    return Jet(tuple(c), mode)


def growth_profile(jet: Jet, seq, rho_grid: Sequence[float]) -> list[tuple[float, float]]:
    """Minimal C per rho with |f^(k)(0)| <= C rho^k k! M_k; log-domain."""
    logs = jet.log_derivatives()
    out = []
    for rho in rho_grid:
        if rho <= 0:
            raise ValueError("rho must be positive")
        best = -math.inf
        for k, ld in enumerate(logs):
            if ld == -math.inf or k > seq.K:
                continue
            best = max(best, ld - k * math.log(rho) - math.lgamma(k + 1)
                       - float(seq.log_terms[k]))
        out.append((rho, 0.0 if best == -math.inf else math.exp(best)))
    return out
