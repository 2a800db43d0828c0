"""Weight sequences: construction, sparse evaluation, and condition checkers.

A weight sequence M = (M_k) is kept as log M_k for k = 0..K, optionally
backed by a closed-form "sparse" evaluator so that conditions can be probed
at indices far beyond the dense prefix (the built-in polygonal family only
reveals its failure of the almost-increasing property at vertex indices
that dwarf any feasible dense truncation).

Conventions: M_0 = 1, all magnitudes are natural logs, and the auxiliary
convex sequence is w_k = log k! + log M_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .config import RunConfig, DEFAULT_CONFIG, checkpoints
from .logutil import (LOG2, UnrepresentableError, log_factorial,
                      log_factorial_over_k, log_of_int)
from .verdicts import (Status, Verdict, bounded_verdict, definite,
                       positive_liminf_verdict, to_infinity_verdict,
                       to_zero_verdict)

# ---------------------------------------------------------------------------
# sparse (closed-form) evaluators


class SparseForm:
    """Closed-form evaluator for log M_k at arbitrary index."""

    family = "none"

    def params(self) -> dict:
        return {}

    def log_term(self, k: int) -> float:
        raise NotImplementedError

    def log_root(self, k: int) -> float:
        """(log M_k)/k; stays representable far beyond log_term's range."""
        return self.log_term(k) / k


@dataclass(frozen=True)
class GevreySparse(SparseForm):
    s: float
    family = "gevrey"

    def params(self) -> dict:
        return {"s": self.s}

    def log_term(self, k: int) -> float:
        return self.s * log_factorial(k)

    def log_root(self, k: int) -> float:
        return self.s * log_factorial_over_k(k)


@lru_cache(maxsize=None)
def tower_vertices(jmax: int) -> list[int]:
    """Vertex indices k_0 = 0, k_1 = 2, and k_{j+1} = k_j^2.

    Each vertex is the square of the previous one, so log2 k_j = 2^(j-1);
    ints stay exactly representable up to j around 24.
    """
    ks = [0, 2]
    for _ in range(2, jmax + 1):
        ks.append(ks[-1] * ks[-1])
    return ks


@lru_cache(maxsize=None)
def tower_phi_coeffs(jmax: int) -> list[int]:
    """c_j with carrier value c_j * log 2 at vertex k_j.

    Even j: k_j * log2(k_{j+1}) = k_j * 2^j.  Odd j: k_j * (2^(j-1) + 2^(j-3)),
    with the j = 1 vertex pinned to 8 and j = 3 using log2(k_1) = 1.
    """
    ks = tower_vertices(jmax)
    cs = [0, 8]
    for j in range(2, jmax + 1):
        if j % 2 == 0:
            cs.append(ks[j] * (1 << j))
        else:
            lo = 1 if j == 3 else (1 << (j - 3))
            cs.append(ks[j] * ((1 << (j - 1)) + lo))
    return cs


# largest vertex index kept exactly; k_16 already has 2^15 bits
_TOWER_JMAX = 16


@dataclass(frozen=True)
class TowerPolygonSparse(SparseForm):
    """The weakly log-convex family whose roots are not almost increasing.

    M_k = exp(phi(k))/k! with phi piecewise linear between the squared
    vertices; every vertex value is an exact integer multiple of log 2.
    """

    family = "appendix_a"

    def params(self) -> dict:
        return {}

    def phi_log2(self, k: int) -> Fraction:
        """phi(k)/log 2 as an exact rational, by linear interpolation."""
        if k < 0:
            raise ValueError("negative index")
        ks = tower_vertices(_TOWER_JMAX)
        cs = tower_phi_coeffs(_TOWER_JMAX)
        if k > ks[-1]:
            raise UnrepresentableError(
                f"index beyond vertex j={_TOWER_JMAX}; tower too tall")
        j = 0
        while ks[j + 1] < k:
            j += 1
        if k == ks[j]:
            return Fraction(cs[j])
        return Fraction(cs[j]) + Fraction(cs[j + 1] - cs[j], ks[j + 1] - ks[j]) * (k - ks[j])

    def log_term(self, k: int) -> float:
        if k == 0:
            return 0.0
        phi = float(self.phi_log2(k)) * LOG2
        if math.isinf(phi):
            raise UnrepresentableError(f"phi({k}) exceeds float range")
        return phi - log_factorial(k)

    def log_root(self, k: int) -> float:
        if k <= 0:
            raise ValueError("index must be positive")
        phi_over_k = float(self.phi_log2(k) / k) * LOG2
        return phi_over_k - log_factorial_over_k(k)

    def slopes_log2(self, jmax: int) -> list[Fraction]:
        """Exact segment slopes (in units of log 2) left of each vertex."""
        ks = tower_vertices(jmax)
        cs = tower_phi_coeffs(jmax)
        return [Fraction(cs[j] - cs[j - 1], ks[j] - ks[j - 1])
                for j in range(1, jmax + 1)]


@dataclass(frozen=True)
class SawtoothSparse(SparseForm):
    """Geometric-breakpoint fixture whose roots drop at every breakpoint.

    log M_k = k * g(k) with g rising linearly from 0 to ~log(ratio^1.5)
    between consecutive breakpoints base * ratio^i and resetting to 0.
    """

    family = "sawtooth"
    base: int = 8
    ratio: int = 4

    def params(self) -> dict:
        return {"base": self.base, "ratio": self.ratio}

    def log_root(self, k: int) -> float:
        if k < self.base:
            return 0.0
        b = self.base
        while b * self.ratio <= k:
            b *= self.ratio
        return (k / b - 1.0) * math.log(8.0)

    def log_term(self, k: int) -> float:
        return k * self.log_root(k) if k > 0 else 0.0


@dataclass(frozen=True)
class ShiftedGevreySparse(SparseForm):
    """Gevrey tail valid from a recorded prefix-adjustment threshold."""

    s: float
    valid_from: int
    family = "adjusted_gevrey"

    def params(self) -> dict:
        return {"s": self.s, "valid_from": self.valid_from}

    def log_term(self, k: int) -> float:
        if k < self.valid_from:
            raise ValueError(f"sparse tail only valid for k >= {self.valid_from}")
        return self.s * log_factorial(k)

    def log_root(self, k: int) -> float:
        if k < self.valid_from:
            raise ValueError(f"sparse tail only valid for k >= {self.valid_from}")
        return self.s * log_factorial_over_k(k)


_FAMILIES = {
    "gevrey": lambda p: GevreySparse(float(p["s"])),
    "appendix_a": lambda p: TowerPolygonSparse(),
    "sawtooth": lambda p: SawtoothSparse(int(p.get("base", 8)), int(p.get("ratio", 4))),
    "adjusted_gevrey": lambda p: ShiftedGevreySparse(float(p["s"]), int(p["valid_from"])),
}


def sparse_from_spec(family: str, params: dict) -> Optional[SparseForm]:
    if family in (None, "none"):
        return None
    try:
        return _FAMILIES[family](params)
    except KeyError as exc:
        raise ValueError(f"unknown sparse family {family!r}") from exc


# ---------------------------------------------------------------------------
# the sequence type


@dataclass(frozen=True)
class WeightSequence:
    label: str
    log_terms: np.ndarray  # log M_k, k = 0..K
    sparse: Optional[SparseForm] = None
    weakly_log_convex: bool = False

    def __post_init__(self) -> None:
        lt = np.asarray(self.log_terms, dtype=float)
        object.__setattr__(self, "log_terms", lt)
        lt.setflags(write=False)
        if lt.ndim != 1 or lt.size < 2:
            raise ValueError("need log M_k for at least k = 0, 1")
        if lt[0] != 0.0:
            raise ValueError("M_0 must equal 1 (log term 0)")
        if not np.all(np.isfinite(lt)):
            raise ValueError("log terms must be finite")

    @property
    def K(self) -> int:
        return self.log_terms.size - 1

    def log_term(self, k: int) -> float:
        """log M_k from the dense prefix, or the sparse form beyond."""
        if 0 <= k <= self.K:
            return float(self.log_terms[k])
        if self.sparse is None:
            raise IndexError(f"k={k} beyond dense prefix and no sparse form")
        return self.sparse.log_term(k)

    def log_root(self, k: int) -> float:
        """log of M_k^(1/k)."""
        if k < 1:
            raise ValueError("roots are defined for k >= 1")
        if k <= self.K:
            return float(self.log_terms[k]) / k
        if self.sparse is None:
            raise IndexError(f"k={k} beyond dense prefix and no sparse form")
        return self.sparse.log_root(k)

    def log_roots(self) -> np.ndarray:
        """Array of log M_k^(1/k) for k = 1..K."""
        k = np.arange(1, self.K + 1)
        return self.log_terms[1:] / k

    def w(self) -> np.ndarray:
        """w_k = log k! + log M_k for k = 0..K."""
        lgam = np.array([math.lgamma(k + 1) for k in range(self.K + 1)])
        return lgam + self.log_terms

    def truncated(self, K: int) -> "WeightSequence":
        if K > self.K:
            raise ValueError("cannot extend a dense prefix by truncation")
        return WeightSequence(self.label, self.log_terms[:K + 1].copy(),
                              self.sparse, self.weakly_log_convex)


def evaluate_sparse(seq: WeightSequence, k: int) -> float:
    """log M_k through the closed form; explicit error when out of range."""
    if seq.sparse is None:
        raise ValueError(f"{seq.label} has no sparse form")
    return seq.sparse.log_term(k)


# ---------------------------------------------------------------------------
# constructors


def make_gevrey(s: float, K: int, label: Optional[str] = None) -> WeightSequence:
    """M_k = (k!)^s."""
    if s < 0:
        raise ValueError("Gevrey exponent must be nonnegative")
    if K < 2:
        raise ValueError("need K >= 2")
    lt = s * np.array([math.lgamma(k + 1) for k in range(K + 1)])
    return WeightSequence(label or f"gevrey[{s:g}]", lt,
                          sparse=GevreySparse(s), weakly_log_convex=True)


def make_appendix_a(K: int, label: str = "appendix_a") -> WeightSequence:
    """The polygonal tower-vertex sequence, dense to K, sparse beyond."""
    if K < 4:
        raise ValueError("need K >= 4")
    sp = TowerPolygonSparse()
    ks = tower_vertices(_TOWER_JMAX)
    cs = tower_phi_coeffs(_TOWER_JMAX)
    jtop = next(j for j, kj in enumerate(ks) if kj >= K)
    xp = np.array(ks[:jtop + 1], dtype=float)
    fp = np.array(cs[:jtop + 1], dtype=float) * LOG2
    kk = np.arange(K + 1, dtype=float)
    phi = np.interp(kk, xp, fp)
    lgam = np.array([math.lgamma(k + 1) for k in range(K + 1)])
    return WeightSequence(label, phi - lgam, sparse=sp, weakly_log_convex=True)


def make_sawtooth(K: int, base: int = 8, ratio: int = 4,
                  label: str = "sawtooth") -> WeightSequence:
    """Fixture violating the almost-increasing property inside the prefix."""
    sp = SawtoothSparse(base, ratio)
    lt = np.array([sp.log_term(k) for k in range(K + 1)])
    return WeightSequence(label, lt, sparse=sp, weakly_log_convex=False)


def from_log_terms(label: str, log_terms: Sequence[float],
                   weakly_log_convex: bool = False) -> WeightSequence:
    return WeightSequence(label, np.asarray(log_terms, dtype=float),
                          weakly_log_convex=weakly_log_convex)


def adjust_prefix_max(base: WeightSequence, other: WeightSequence,
                      label: Optional[str] = None) -> tuple[WeightSequence, int]:
    """Pointwise max with `other` on the prefix where it exceeds `base`.

    Returns the adjusted sequence and the first index from which it agrees
    with `base` onwards.  The max of two convex w-sequences is convex, so
    weak log-convexity survives.  The base's closed form is kept: it stays
    valid beyond the dense prefix, where no adjustment ever applies.
    """
    K = min(base.K, other.K)
    a, b = base.log_terms[:K + 1], other.log_terms[:K + 1]
    merged = np.maximum(a, b)
    above = np.nonzero(b > a + 1e-12)[0]
    threshold = int(above[-1]) + 1 if above.size else 0
    seq = WeightSequence(label or f"{base.label}|adj", merged, sparse=base.sparse,
                         weakly_log_convex=base.weakly_log_convex and other.weakly_log_convex)
    return seq, threshold


# ---------------------------------------------------------------------------
# checkers


def check_weakly_log_convex(seq: WeightSequence,
                            cfg: RunConfig = DEFAULT_CONFIG) -> Verdict:
    """Increments of w_k = log k! + log M_k must be nondecreasing (exact)."""
    if seq.K < 2:
        raise ValueError("need at least three dense terms")
    w = seq.w()
    d = np.diff(w)
    slack = 1e-12 * np.maximum(1.0, np.abs(w[1:-1]))
    bad = np.nonzero(d[1:] < d[:-1] - slack)[0]
    stats = [(k, float(d[min(k, len(d) - 1)])) for k in checkpoints(seq.K, cfg)]
    if bad.size:
        k = int(bad[0]) + 1
        return Verdict(Status.REFUTED, seq.K, tuple(stats), max(s for _, s in stats),
                       witness=(k, float(d[k] - d[k - 1])),
                       note="convexity of w fails")
    return Verdict(Status.HOLDS_UP_TO, seq.K, tuple(stats),
                   max(s for _, s in stats), note="exact check")


_GROWTH_KINDS = ("derivation_closed", "liminf_root_positive", "root_to_infinity")


def check_growth(seq: WeightSequence, which: str,
                 cfg: RunConfig = DEFAULT_CONFIG) -> Verdict:
    """Growth conditions: quotient roots bounded, liminf of roots, roots to infinity.

    Finite data alone yields ESTIMATE; a recognized family forces the status.
    """
    if which not in _GROWTH_KINDS:
        raise ValueError(f"unknown growth check {which!r}")
    if seq.K < 8:
        raise ValueError("need K >= 8")
    roots = seq.log_roots()
    cps = checkpoints(seq.K, cfg)
    if which == "derivation_closed":
        k = np.arange(1, seq.K)
        stat = np.exp((seq.log_terms[2:] - seq.log_terms[1:-1]) / k)
        sups = np.maximum.accumulate(stat)
        pts = [(c, float(sups[min(c, len(sups)) - 1])) for c in cps]
        v = bounded_verdict(pts, seq.K, cfg)
    elif which == "liminf_root_positive":
        infs = np.minimum.accumulate(np.exp(roots))
        pts = [(c, float(infs[c - 1])) for c in cps]
        v = positive_liminf_verdict(pts, seq.K, cfg)
    else:
        vals = np.exp(roots)
        pts = [(c, float(vals[c - 1])) for c in cps]
        v = to_infinity_verdict(pts, seq.K, cfg)
    known = _family_growth_status(seq, which)
    if known is None:
        if v.status is not Status.ESTIMATE:
            v = Verdict(Status.ESTIMATE, v.truncation, v.checkpoints,
                        v.constant_estimate, note="no family knowledge; trend was "
                        + v.status.value)
        return v
    if known is v.status:
        return v
    wit = v.witness if known is Status.REFUTED else None
    if known is Status.REFUTED and wit is None:
        wit = (seq.K, float(np.exp(roots[-1])))
    return Verdict(known, v.truncation, v.checkpoints, v.constant_estimate,
                   witness=wit, note="family closed form")


def _family_growth_status(seq: WeightSequence, which: str) -> Optional[Status]:
    sp = seq.sparse
    if sp is None:
        # geometric rows (log M_k affine in k, constants included) have
        # roots converging to a positive limit; that is enough to settle
        # all three growth questions without a closed-form tag
        d = np.diff(seq.log_terms)
        if d.size and np.all(np.abs(d - d[0]) <= 1e-12):
            if which == "derivation_closed":
                return Status.HOLDS_UP_TO
            if which == "liminf_root_positive":
                return Status.HOLDS_UP_TO
            return Status.REFUTED
        return None
    if isinstance(sp, (GevreySparse, ShiftedGevreySparse)):
        s = sp.s
        if which == "derivation_closed":
            return Status.HOLDS_UP_TO
        if which == "liminf_root_positive":
            return Status.HOLDS_UP_TO
        return Status.HOLDS_UP_TO if s > 0 else Status.REFUTED
    if isinstance(sp, TowerPolygonSparse):
        return Status.HOLDS_UP_TO
    if isinstance(sp, SawtoothSparse):
        # roots cycle between 1 and a fixed ceiling forever
        return Status.REFUTED if which == "root_to_infinity" else Status.HOLDS_UP_TO
    return None


# sparse probe vertices used for far-out witnesses (j = 5..9)
_SPARSE_PROBE_J = (5, 6, 7, 8, 9)


def sparse_probe_indices() -> list[int]:
    ks = tower_vertices(max(_SPARSE_PROBE_J))
    return [ks[j] for j in _SPARSE_PROBE_J]


def check_almost_increasing(seq: WeightSequence, cfg: RunConfig = DEFAULT_CONFIG,
                            sparse_witness: bool = False) -> Verdict:
    """Roots almost increasing: sup over j <= k of M_j^(1/j)/M_k^(1/k) bounded."""
    if seq.K < 8:
        raise ValueError("need K >= 8")
    roots = seq.log_roots()
    prefmax = np.maximum.accumulate(roots)
    defect = np.exp(np.maximum.accumulate(prefmax - roots))
    pts = [(c, float(defect[c - 1])) for c in checkpoints(seq.K, cfg)]
    witness = None
    if sparse_witness and seq.sparse is not None:
        witness = _sparse_defect_witness(seq, math.log(cfg.refute_threshold))
    return bounded_verdict(pts, seq.K, cfg, witness=witness,
                           witness_threshold=cfg.refute_threshold,
                           note="root defect")


def _sparse_defect_witness(seq: WeightSequence,
                           log_threshold: float) -> Optional[tuple]:
    """First probe-vertex pair whose root drop clears the threshold.

    Returned as (j, k, defect) with j < k; falls back to the largest drop
    seen when no pair clears it.
    """
    ks = tower_vertices(max(_SPARSE_PROBE_J))
    pairs = [(ks[j - 1], ks[j]) for j in _SPARSE_PROBE_J]
    # also pair the dense prefix max against the first probe vertex
    dense_roots = seq.log_roots()
    dense_arg = int(np.argmax(dense_roots)) + 1
    pairs.append((dense_arg, ks[_SPARSE_PROBE_J[0]]))
    best = None
    for j, k in pairs:
        try:
            drop = (float(dense_roots[j - 1]) if j <= seq.K else seq.log_root(j)) \
                - seq.log_root(k)
        except (UnrepresentableError, IndexError, ValueError):
            continue
        if drop > log_threshold:
            return (j, k, math.exp(min(drop, 700.0)))
        if best is None or drop > best[2]:
            best = (j, k, drop)
    if best is None:
        return None
    return (best[0], best[1], math.exp(min(best[2], 700.0)))


def compare_inclusion(M: WeightSequence, N: WeightSequence, relation: str,
                      cfg: RunConfig = DEFAULT_CONFIG,
                      sparse_probes: bool = False) -> Verdict:
    """Inclusion relations: statistic (M_k/N_k)^(1/k) bounded (weak) or to 0 (strict)."""
    if relation not in ("<=", "<<"):
        raise ValueError("relation must be '<=' (weak) or '<<' (strict)")
    K = min(M.K, N.K)
    k = np.arange(1, K + 1)
    stat = np.exp((M.log_terms[1:K + 1] - N.log_terms[1:K + 1]) / k)
    cps = checkpoints(K, cfg)
    if relation == "<=":
        sups = np.maximum.accumulate(stat)
        pts = [(c, float(sups[c - 1])) for c in cps]
        witness = None
        if sparse_probes and M.sparse is not None and N.sparse is not None:
            witness = _sparse_ratio_witness(M, N)
        return bounded_verdict(pts, K, cfg, witness=witness,
                               witness_threshold=cfg.refute_threshold,
                               note="ratio roots")
    pts = [(c, float(stat[c - 1])) for c in cps]
    return to_zero_verdict(pts, K, cfg, note="ratio roots")


def _sparse_ratio_witness(M: WeightSequence, N: WeightSequence) -> Optional[tuple]:
    best = None
    for k in sparse_probe_indices():
        try:
            r = M.log_root(k) - N.log_root(k)
        except (UnrepresentableError, IndexError, ValueError):
            continue
        if best is None or r > best[1]:
            best = (k, r)
    if best is None:
        return None
    return (best[0], best[0], math.exp(min(best[1], 700.0)))


def seminorm(jet, seq: WeightSequence, rho: float) -> float:
    """sup_k |f^(k)(x)| / (rho^k k! M_k) over the jet's orders."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    coeffs = jet.float_coefficients() if hasattr(jet, "float_coefficients") else list(jet)
    best = -math.inf
    for k, c in enumerate(coeffs):
        if k > seq.K:
            break
        if c == 0:
            continue
        # |f^(k)| = |c_k| k!, so the k! cancels against the seminorm weight
        val = math.log(abs(float(c))) - k * math.log(rho) - float(seq.log_terms[k])
        best = max(best, val)
    return 0.0 if best == -math.inf else math.exp(best)
