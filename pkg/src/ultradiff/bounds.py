"""Certificate algebra for derivative-growth bounds.

A certificate asserts a bound of the shape C rho^k k! M_k (shift "none")
or C rho^k (k-1)! M_{k-1} (shift "minus_one", with the convention that
the k = 0 bound is plain C).  The generators in this module turn a
certificate on the data of a problem (an ODE field, a linear-operator
family, a mapping to invert) into a certificate on the solution, mirroring
the inductive majorant constructions; everything is scalar and log-domain,
and every generated certificate can be cross-checked for dominance against
an exact jet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .composition import n_beta_coefficients
from .config import RunConfig, DEFAULT_CONFIG
from .jets import Jet
from .matrices import WeightMatrix
from .sequences import WeightSequence, compare_inclusion
from .verdicts import Status, Verdict


@dataclass(frozen=True)
class BoundCertificate:
    C: float
    rho: float
    sequence: WeightSequence
    shift: str = "none"  # "none" | "minus_one"
    kind: str = "function"  # "function" | "ode_field" | "inverse" | "reciprocal"

    def __post_init__(self) -> None:
        if not (self.C > 0 and math.isfinite(self.C)):
            raise ValueError("C must be finite and positive")
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise ValueError("rho must be finite and positive")
        if self.shift not in ("none", "minus_one"):
            raise ValueError("shift must be none or minus_one")
        if self.kind not in ("function", "ode_field", "inverse", "reciprocal"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def log_bound(self, k: int) -> float:
        """log of the asserted bound on the k-th derivative norm."""
        if k < 0:
            raise ValueError("negative order")
        if self.shift == "none":
            return (math.log(self.C) + k * math.log(self.rho)
                    + math.lgamma(k + 1) + self.sequence.log_term(k))
        if k == 0:
            return math.log(self.C)
        return (math.log(self.C) + k * math.log(self.rho)
                + math.lgamma(k) + self.sequence.log_term(k - 1))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "C": self.C, "rho": self.rho,
                "sequence_label": self.sequence.label, "shift": self.shift}


@dataclass(frozen=True)
class MajorantSpec:
    """Parameters of the square-root majorant solving Y' = A/(1 - eta p (Y - A))."""

    A: float
    eta: float
    p: float
    k: int

    def __post_init__(self) -> None:
        if self.A < 1:
            raise ValueError("A must be >= 1")
        if self.eta <= 0 or self.p <= 0:
            raise ValueError("eta and p must be positive")
        if self.k < 1:
            raise ValueError("target order must be >= 1")


# ---------------------------------------------------------------------------
# almost-increasing witnesses


def _as_matrix(mat_or_seq) -> WeightMatrix:
    if isinstance(mat_or_seq, WeightMatrix):
        return mat_or_seq
    if isinstance(mat_or_seq, WeightSequence):
        return WeightMatrix((1.0,), (mat_or_seq,))
    raise TypeError("expected a weight matrix or a single weight sequence")


def _window_H(left: WeightSequence, right: WeightSequence,
              form: str, K: Optional[int] = None) -> float:
    """Minimal H >= 1 for the finite window 2 <= j <= k <= K.

    form "roots": (M^left_j)^(1/j) <= H (M^right_k)^(1/k).
    form "p":     (M^left_{j-1}/j)^(1/(j-1)) <= H (M^right_{k-1}/k)^(1/(k-1)).
    """
    K = min(left.K, right.K) if K is None else min(K, left.K, right.K)
    if form == "roots":
        a = np.array([left.log_terms[j] / j for j in range(1, K + 1)])
        b = np.array([right.log_terms[k] / k for k in range(1, K + 1)])
    elif form == "p":
        a = np.array([(left.log_terms[j - 1] - math.log(j)) / (j - 1)
                      for j in range(2, K + 1)])
        b = np.array([(right.log_terms[k - 1] - math.log(k)) / (k - 1)
                      for k in range(2, K + 1)])
    else:
        raise ValueError("form must be roots or p")
    gap = float(np.max(np.maximum.accumulate(a) - b))
    return max(1.0, math.exp(gap))


def rai_witness(mat_or_seq, lam: Optional[float] = None,
                cfg: RunConfig = DEFAULT_CONFIG, form: str = "p",
                sparse_probes: bool = False) -> tuple[float, float]:
    """Smallest row mu dominating row lam in the almost-increasing sense.

    Returns (mu, H) with H the minimal finite-window constant.  Raises
    when no row qualifies (the almost-increasing hypothesis fails).
    """
    from .matrices import _rai_pair
    mat = _as_matrix(mat_or_seq)
    lam = mat.lambdas[0] if lam is None else lam
    row = mat.row(lam)
    for mu in mat.lambdas:
        v = _rai_pair(row, mat.row(mu), cfg, sparse_probes)
        if v.status is Status.HOLDS_UP_TO:
            return mu, _window_H(row, mat.row(mu), form)
    raise ValueError(
        f"no row dominates row {lam}: almost-increasing hypothesis fails")


# ---------------------------------------------------------------------------
# the square-root majorant


def majorant_derivatives(spec: MajorantSpec, jmax: int) -> tuple[list[float], list[float]]:
    """(log Y^(j)(0), log G^(j)(0)) for j = 0..jmax, via log-gamma.

    Y^(j)(0) = (2A)^j (eta p)^(j-1) Gamma(j - 1/2) / (2 sqrt(pi)) for j >= 1
    and Y(0) = A; G^(j)(0) = A eta^j j! p^j.
    """
    if jmax > spec.k:
        raise ValueError("jmax exceeds the spec's target order")
    A, eta, p = spec.A, spec.eta, spec.p
    logY = [math.log(A)]
    logG = [math.log(A)]
    for j in range(1, jmax + 1):
        logY.append(j * math.log(2 * A) + (j - 1) * math.log(eta * p)
                    + math.lgamma(j - 0.5) - math.log(2.0) - 0.5 * math.log(math.pi))
        logG.append(math.log(A) + j * (math.log(eta) + math.log(p))
                    + math.lgamma(j + 1))
    return logY, logG


def majorant_jet_exact(A: Fraction, eta: Fraction, p: Fraction,
                       jmax: int) -> list[Fraction]:
    """Y^(j)(0) from the binomial series of the closed-form solution.

    Y(t) = A + (1 - sqrt(1 - 2 A eta p t)) / (eta p); this is the
    independent check of the Gamma closed form used above.
    """
    A, eta, p = Fraction(A), Fraction(eta), Fraction(p)
    a = A * eta * p
    out = [A]
    # sqrt(1 - u) = sum binom(1/2, n) (-u)^n with u = 2 a t
    binom = Fraction(1)
    for j in range(1, jmax + 1):
        binom *= (Fraction(1, 2) - (j - 1)) / j
        coeff = -binom * (-2 * a) ** j  # t^j coefficient of 1 - sqrt(...)
        out.append(coeff * math.factorial(j) / (eta * p))
    return out


# ---------------------------------------------------------------------------
# ODE bound, Roumieu shape


@dataclass(frozen=True)
class OdeBoundResult:
    certificate: BoundCertificate
    mu: float
    H: float
    scale: float
    A_effective: float

    def to_dict(self) -> dict:
        return {**self.certificate.to_dict(), "mu": self.mu, "H": self.H,
                "normalization_scale": self.scale,
                "A_effective": self.A_effective}


def ode_bound_roumieu(cert: BoundCertificate, A: float,
                      mat: Optional[WeightMatrix] = None,
                      cfg: RunConfig = DEFAULT_CONFIG) -> OdeBoundResult:
    """Solution certificate for x' = f(x, t) from a field certificate.

    The output bound is D sigma^k (k-1)! M^mu_{k-1} with D = 2A' and
    sigma = 2 A' eta H t, where (mu, H) is the almost-increasing witness,
    eta = rho, t >= 1 rescales the sequence so its first term is >= 2
    (the window constant H is invariant under that rescale), and
    A' = max(A, C t) keeps the envelope above the rescaled certificate.
    """
    if cert.shift != "minus_one":
        raise ValueError("field certificate must carry the (k-1)! shape")
    mat = _as_matrix(cert.sequence) if mat is None else mat
    lam = next(l for l in mat.lambdas if mat.row(l) is cert.sequence) \
        if any(mat.row(l) is cert.sequence for l in mat.lambdas) else mat.lambdas[0]
    row = mat.row(lam)
    M1 = math.exp(row.log_terms[1])
    scale = max(1.0, 2.0 / M1)
    mu, H = rai_witness(mat, lam, cfg, form="p")
    A_eff = max(A, cert.C * scale, 1.0)
    eta = cert.rho
    D = 2.0 * A_eff
    sigma = max(1.0, 2.0 * A_eff * eta * H * scale)
    out = BoundCertificate(D, sigma, mat.row(mu), shift="minus_one",
                           kind="function")
    return OdeBoundResult(out, mu, H, scale, A_eff)


# ---------------------------------------------------------------------------
# Neumann series bound (operator inversion)


@dataclass(frozen=True)
class NeumannBoundResult:
    log_exact: tuple[float, ...]  # log of the exact double sum, per k
    certificate: BoundCertificate
    mu: float
    H: float

    def to_dict(self) -> dict:
        return {**self.certificate.to_dict(), "mu": self.mu, "H": self.H,
                "log_exact": list(self.log_exact)}


def neumann_inverse_bound(cert: BoundCertificate, A: float,
                          mat: Optional[WeightMatrix] = None,
                          K: Optional[int] = None,
                          cfg: RunConfig = DEFAULT_CONFIG) -> NeumannBoundResult:
    """Bound on the derivatives of x -> T(x)^{-1} from a bound on T.

    Exact per-k value of A sum_{j>=1} (AC)^j rho^k sum_{compositions}
    prod M_{alpha_i} by a sum-semiring DP, plus the simplified certificate
    A (rho H (1 + AC))^k k! M^mu_k.  Requires AC < 1; rescale the
    certificate first (see rescale_for_neumann) when it is not.
    """
    if cert.shift != "none":
        raise ValueError("operator certificate must carry the k! shape")
    AC = A * cert.C
    if AC >= 1.0:
        raise ValueError(f"divergent Neumann sum: A*C = {AC:g} >= 1; "
                         "rescale the certificate first")
    mat = _as_matrix(cert.sequence) if mat is None else mat
    lam = mat.lambdas[0]
    row = cert.sequence
    K = min(row.K, cfg.dp_cap) if K is None else min(K, row.K, cfg.dp_cap)
    mu, H = rai_witness(mat, lam, cfg, form="roots")
    log_m = row.log_terms[:K + 1]
    log_ac = math.log(AC)
    # s[j][k] = log sum over compositions of k into j parts of prod M_a
    NEG = -math.inf
    prev = np.full(K + 1, NEG)
    prev[0] = 0.0
    # total[k] accumulates log sum_j (AC)^j s[j][k]
    total = np.full(K + 1, NEG)
    for j in range(1, K + 1):
        cur = np.full(K + 1, NEG)
        for k in range(j, K + 1):
            terms = log_m[1:k - j + 2] + prev[k - 1:j - 2 if j >= 2 else None:-1]
            m = np.max(terms)
            cur[k] = m + math.log(np.sum(np.exp(terms - m))) if m > NEG else NEG
        prev = cur
        upd = cur + j * log_ac
        both = np.stack([total, upd])
        mx = np.max(both, axis=0)
        with np.errstate(invalid="ignore"):
            total = np.where(mx > NEG,
                             mx + np.log(np.sum(np.exp(both - mx), axis=0)),
                             NEG)
    logs = [math.log(A)]
    for k in range(1, K + 1):
        logs.append(math.log(A) + k * math.log(cert.rho) + total[k])
    sigma = max(1.0, cert.rho * H * (1.0 + AC))
    simp = BoundCertificate(A, sigma, mat.row(mu), shift="none",
                            kind="reciprocal")
    return NeumannBoundResult(tuple(logs), simp, mu, H)


def rescale_for_neumann(cert: BoundCertificate, A: float,
                        margin: float = 2.0) -> BoundCertificate:
    """(C, rho) -> (C/tau, tau rho) with tau chosen so A*(C/tau) < 1.

    Valid for the Neumann sum because only derivative orders >= 1 of the
    operator enter it, and C rho^k <= (C/tau)(tau rho)^k for k >= 1.
    """
    AC = A * cert.C
    if AC < 1.0:
        return cert
    tau = margin * AC
    return BoundCertificate(cert.C / tau, tau * cert.rho, cert.sequence,
                            cert.shift, cert.kind)


# ---------------------------------------------------------------------------
# inverse function bound


@dataclass(frozen=True)
class InverseBoundResult:
    log_R: tuple[float, ...]  # log bound on R_k, per k (relaxed power form)
    certificate: BoundCertificate
    neumann: NeumannBoundResult
    nu: float
    H2: float

    def to_dict(self) -> dict:
        return {**self.certificate.to_dict(), "nu": self.nu, "H2": self.H2,
                "log_R": list(self.log_R)}


def _power_sum_logs(log_s: Sequence[float], K: int) -> list[float]:
    """log of k! [x^k] (sum_b exp(log_s[b]) x^b)^k for k = 0..K."""
    s = np.exp(np.array(log_s[:K + 1]) - np.max(log_s[:K + 1]))
    shift = float(np.max(log_s[:K + 1]))
    out = [0.0]
    for k in range(1, K + 1):
        # (sum s_b x^b)^k truncated at x^k, by repeated convolution
        pw = np.zeros(k + 1)
        pw[0] = 1.0
        scale = 0.0  # running log rescale keeping pw representable
        for _ in range(k):
            nxt = np.convolve(pw, s[:k + 1])[:k + 1]
            mx = float(np.max(nxt))
            nxt /= mx
            scale += math.log(mx) + shift
            pw = nxt
        val = float(pw[k])
        out.append(math.lgamma(k + 1) + scale
                   + (math.log(val) if val > 0 else -math.inf))
    return out


def n_beta_exact_bound(log_s: Sequence[float], k: int) -> float:
    """log of sum_beta N(beta) prod_i s_{beta_i}, exact coefficients, k <= 9."""
    best = -math.inf
    terms = []
    for beta, c in n_beta_coefficients(k).items():
        t = math.log(c) + sum(log_s[b] for b in beta)
        terms.append(t)
    m = max(terms)
    return m + math.log(sum(math.exp(t - m) for t in terms))


def inverse_fn_bound(cert: BoundCertificate, A: float,
                     mat: Optional[WeightMatrix] = None,
                     K: Optional[int] = None,
                     cfg: RunConfig = DEFAULT_CONFIG) -> InverseBoundResult:
    """Certificate for the local inverse of f from a certificate on f.

    The derivative of f carries the k! shape, so the operator-inversion
    bound applies to it; the inverse's higher derivatives are controlled
    by the recursion whose coefficients are the N(beta) integers, relaxed
    to the k-th power of the one-variable generating sum.  A is the
    envelope of the inverted first derivative.
    """
    if cert.shift != "minus_one":
        raise ValueError("mapping certificate must carry the (k-1)! shape")
    mat = _as_matrix(cert.sequence) if mat is None else mat
    # T = f' satisfies the k!-shaped bound with the same (C, rho)
    t_cert = BoundCertificate(cert.C, cert.rho, cert.sequence, "none",
                              "function")
    t_cert = rescale_for_neumann(t_cert, A)
    neu = neumann_inverse_bound(t_cert, A, mat, K, cfg)
    s_cert = neu.certificate
    K_eff = len(neu.log_exact) - 1
    nu, H2 = rai_witness(mat, neu.mu, cfg, form="roots")
    nu_row = mat.row(nu)
    # s_b = bound on ||S^(b)||/b! = D_S sigma_S^b M^mu_b
    mu_row = s_cert.sequence
    log_s = [math.log(s_cert.C) + b * math.log(s_cert.rho)
             + mu_row.log_terms[b] for b in range(K_eff + 1)]
    log_R = _power_sum_logs(log_s, K_eff)
    sigma = max(1.0, 4.0 * s_cert.C * s_cert.rho * H2)
    out = BoundCertificate(max(A, 1.0), sigma, nu_row, shift="minus_one",
                           kind="inverse")
    return InverseBoundResult(tuple(log_R), out, neu, nu, H2)


# ---------------------------------------------------------------------------
# regularization of a Beurling-style envelope (two-sequence sandwich)


@dataclass(frozen=True)
class Lemma4Result:
    N1: WeightSequence
    N2: WeightSequence
    preconditions: dict
    sandwich_ok: bool
    gap_constant: float  # exact max of (N1_j)^{1/j} / (N2_k)^{1/k}, j <= k
    strict_inclusion: Verdict  # N2 against M3

    def to_dict(self) -> dict:
        return {"preconditions": {k: v.status.value if isinstance(v, Verdict) else v
                                  for k, v in self.preconditions.items()},
                "sandwich_ok": self.sandwich_ok,
                "gap_constant": self.gap_constant,
                "strict_inclusion": self.strict_inclusion.status.value}


def lemma4_construct(L: Sequence[float], M1: WeightSequence, M2: WeightSequence,
                     M3: WeightSequence, H1: float,
                     cfg: RunConfig = DEFAULT_CONFIG) -> Lemma4Result:
    """Sandwich sequences between an envelope L and a sequence pair.

    `L` is the list of log L_k values (-inf encodes a zero entry, which is
    replaced by 1).  The outputs N1 <= N2 satisfy L <= N1, the root gap
    (N1_j)^(1/j) <= sqrt(H1) (N2_k)^(1/k) for j <= k, and N2 strictly
    below M3 in the inclusion order (trend verdict).
    """
    K = min(len(L) - 1, M1.K, M2.K, M3.K)
    if H1 < 1:
        raise ValueError("H1 must be >= 1")
    lbar = np.array([0.0 if not math.isfinite(L[k]) else float(L[k])
                     for k in range(K + 1)])
    lbar[0] = min(lbar[0], 0.0) if math.isfinite(L[0]) else 0.0
    k_idx = np.arange(1, K + 1)
    l_roots = np.maximum.accumulate(lbar[1:] / k_idx)

    pre = {}
    l_seq_terms = np.concatenate([[0.0], np.maximum(lbar[1:], 0.0)])
    pre["L_strictly_below_M1"] = compare_inclusion(
        WeightSequence("Lbar", l_seq_terms), M1, "<<", cfg)
    pre["M1_le_M2"] = bool(np.all(M1.log_terms[:K + 1] <= M2.log_terms[:K + 1] + 1e-9))
    pre["M2_le_M3"] = bool(np.all(M2.log_terms[:K + 1] <= M3.log_terms[:K + 1] + 1e-9))
    h_chain = _window_H(M1, M2, "roots", K)
    pre["chain_H1_ok"] = bool(h_chain <= H1 * (1.0 + 1e-12))

    def build(M: WeightSequence, label: str) -> WeightSequence:
        roots = np.maximum(M.log_terms[1:K + 1] / (2.0 * k_idx), l_roots)
        lt = np.concatenate([[0.0], roots * k_idx])
        return WeightSequence(label, lt)

    n1 = build(M1, "N1")
    n2 = build(M2, "N2")

    sandwich = bool(np.all(lbar[1:] <= n1.log_terms[1:] + 1e-9)
                    and np.all(n1.log_terms <= n2.log_terms + 1e-9))
    r1 = np.maximum.accumulate(n1.log_terms[1:] / k_idx)
    r2 = n2.log_terms[1:] / k_idx
    gap = math.exp(float(np.max(r1 - r2)))
    strict = compare_inclusion(n2, M3, "<<", cfg)
    return Lemma4Result(n1, n2, pre, sandwich, gap, strict)


# ---------------------------------------------------------------------------
# ODE bound, Beurling shape


@dataclass(frozen=True)
class BeurlingOdeResult:
    certificate: BoundCertificate
    stages: dict

    def to_dict(self) -> dict:
        return {**self.certificate.to_dict(),
                "stages": {k: (v.to_dict() if hasattr(v, "to_dict") else v)
                           for k, v in self.stages.items()}}


def ode_bound_beurling(cert_family: Callable[[float], float],
                       mat: WeightMatrix, lam: float, sigma_target: float,
                       A: float, rho_grid: Optional[Sequence[float]] = None,
                       cfg: RunConfig = DEFAULT_CONFIG) -> BeurlingOdeResult:
    """Solution certificate at a requested geometric rate sigma_target.

    `cert_family(rho)` returns the constant C(rho) of the field bound
    C rho^k (k-1)! M^nu_{k-1} available at every rate rho.  Pipeline:
    pick the witness rows (nu, mu) under lam, build the envelope L by
    minimizing over the sampled family, regularize through
    lemma4_construct, run the Roumieu generator on the sandwich pair, and
    convert to sigma_target through the strict inclusion of N2 in M^lam.
    """
    from .matrices import _rai_pair
    if sigma_target <= 0:
        raise ValueError("sigma_target must be positive")
    lam_row = mat.row(lam)
    K = min(mat.K, cfg.dp_cap)

    def pick_below(target: float) -> tuple[float, float]:
        for cand in mat.lambdas:
            if cand > target:
                continue
            v = _rai_pair(mat.row(cand), mat.row(target), cfg, False)
            if v.status is Status.HOLDS_UP_TO:
                return cand, _window_H(mat.row(cand), mat.row(target), "roots", K)
        raise ValueError(f"pipeline stage rai: no row under {target} qualifies")

    mu, J = pick_below(lam)
    nu, H = pick_below(mu)
    nu_row, mu_row = mat.row(nu), mat.row(mu)

    if rho_grid is None:
        rho_grid = [2.0 ** (-i) for i in range(0, 11)]
    # L_{k-1} <= inf over the family of C(rho) rho^k M^nu_{k-1}
    Ls = np.full(K + 1, math.inf)
    for rho in rho_grid:
        C = float(cert_family(rho))
        if C < 1.0 or not math.isfinite(C):
            raise ValueError("pipeline stage family: C(rho) must be >= 1")
        cand = (math.log(C) + (np.arange(K + 1) + 1) * math.log(rho)
                + nu_row.log_terms[:K + 1])
        Ls = np.minimum(Ls, cand)

    l4 = lemma4_construct(list(Ls), nu_row, mu_row, lam_row, max(H * H, 1.0), cfg)
    if not l4.sandwich_ok:
        raise ValueError("pipeline stage lemma4: sandwich verification failed")
    if l4.strict_inclusion.status is Status.REFUTED:
        raise ValueError("pipeline stage lemma4: N2 not strictly below target row")

    # Roumieu generator on the sandwich pair: field certificate w.r.t. N1
    n1_cert = BoundCertificate(max(1.0, math.exp(float(np.max(
        np.array(list(Ls))[1:] - l4.N1.log_terms[1:])))), 1.0, l4.N1,
        shift="minus_one", kind="ode_field")
    pair = WeightMatrix((1.0, 2.0), (l4.N1, l4.N2), label="lemma4-pair")
    rmu, Hp = 2.0, _window_H(l4.N1, l4.N2, "p", K)
    M1_n1 = math.exp(l4.N1.log_terms[1])
    scale = max(1.0, 2.0 / M1_n1)
    A_eff = max(A, n1_cert.C * scale, 1.0)
    D = 2.0 * A_eff
    sigma_r = max(1.0, 2.0 * A_eff * n1_cert.rho * Hp * scale)

    # conversion: N2 strictly below M^lam lets any target rate be bought
    tau = sigma_target / (2.0 * sigma_r)
    ks = np.arange(1, K + 1)
    conv = l4.N2.log_terms[1:K + 1] - ks * math.log(tau) \
        - lam_row.log_terms[1:K + 1]
    E = max(1.0, math.exp(float(np.max(conv))))
    C_out = 2.0 * D * E * sigma_r / sigma_target
    out = BoundCertificate(C_out, sigma_target, lam_row,
                           shift="minus_one", kind="function")
    return BeurlingOdeResult(out, {
        "mu": mu, "nu": nu, "H": H, "J": J, "Hp": Hp,
        "lemma4": l4, "roumieu_sigma": sigma_r, "conversion_E": E,
    })


# ---------------------------------------------------------------------------
# dominance crosscheck


def crosscheck_bound(cert: BoundCertificate, jet: Jet,
                     k_min: int = 1) -> dict:
    """Dominance of a certificate over a jet's derivative values.

    Compares log bound against log |f^(k)(0)| for k from k_min up to the
    common order; reports the worst margin and the first violation.
    """
    logs = jet.log_derivatives()
    K = min(jet.order, cert.sequence.K + (1 if cert.shift == "minus_one" else 0))
    worst = math.inf
    violation = None
    rows = []
    for k in range(k_min, K + 1):
        lb = cert.log_bound(k)
        margin = lb - logs[k]
        rows.append((k, lb, logs[k]))
        if margin < worst:
            worst = margin
        if margin < -1e-9 and violation is None:
            violation = k
    return {"dominates": violation is None, "first_violation": violation,
            "worst_log_margin": worst, "rows": rows}
