"""Weight functions through their convex log-time carrier.

A weight function omega is stored as the piecewise-linear convex function
phi(t) = omega(e^t) via knots (t_i, phi_i) with phi(0) = 0 and a finite
tail slope.  Conjugation is exact PL Legendre duality on rational knots,
so phi** = phi holds with zero tolerance; a finite tail slope puts a hard
horizon on the conjugate and nothing is ever extrapolated past it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .config import RunConfig, DEFAULT_CONFIG, checkpoints
from .sequences import WeightSequence
from .verdicts import Status, Verdict, bounded_verdict, definite, to_zero_verdict

_F = Fraction


@dataclass(frozen=True)
class PowerFamily:
    """omega(t) = t^(1/s) for t >= 1, so phi(t) = e^(t/s).

    Closed forms: conjugate phi*(u) = s u (log(s u) - 1) for s u >= 1,
    attained at t = s log(s u); for s u <= 1 the sup sits at t = 0, giving
    phi*(u) = -1.
    """

    s: float

    def phi(self, t: float) -> float:
        return math.exp(t / self.s) if t >= 0 else 1.0

    def omega(self, t: float) -> float:
        return t ** (1.0 / self.s) if t >= 1.0 else 0.0

    def conjugate(self, u: float) -> float:
        su = self.s * u
        if su <= 1.0:
            return -1.0
        return su * (math.log(su) - 1.0)


@dataclass(frozen=True)
class WeightFunction:
    """Piecewise-linear phi with knots (t_i, phi_i), t_0 = 0, phi_0 = 0."""

    knots: tuple[tuple[Fraction, Fraction], ...]
    tail_slope: Fraction
    family: Optional[PowerFamily] = None
    label: str = "omega"

    def __post_init__(self) -> None:
        ks = tuple((_F(t), _F(p)) for t, p in self.knots)
        object.__setattr__(self, "knots", ks)
        object.__setattr__(self, "tail_slope", _F(self.tail_slope))
        if len(ks) < 1 or ks[0][0] != 0:
            raise ValueError("first knot must sit at t = 0")
        # phi(0) = 0 unless an analytic family supplies its own carrier
        # level (the power family keeps phi(0) = 1 so the conjugate matches
        # its closed form exactly)
        if self.family is None and ks[0][1] != 0:
            raise ValueError("phi(0) must be 0")
        if ks[0][1] < 0:
            raise ValueError("phi(0) must be nonnegative")
        ts = [t for t, _ in ks]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("knot abscissas must be strictly increasing")

    def slopes(self) -> list[Fraction]:
        """Segment slopes, tail slope last."""
        out = []
        for (a, pa), (b, pb) in zip(self.knots, self.knots[1:]):
            out.append((pb - pa) / (b - a))
        out.append(self.tail_slope)
        return out

    def is_convex(self) -> tuple[bool, Optional[int]]:
        """(convex?, index of first violating segment pair)."""
        s = self.slopes()
        for i in range(len(s) - 1):
            if s[i + 1] < s[i]:
                return False, i
        if any(x < 0 for x in s):
            return False, 0
        return True, None

    def phi(self, t) -> Fraction:
        """Exact phi(t) for t >= 0 (linear extension past the last knot)."""
        t = _F(t)
        if t < 0:
            raise ValueError("carrier defined for t >= 0")
        last_t, last_p = self.knots[-1]
        if t >= last_t:
            return last_p + self.tail_slope * (t - last_t)
        for (a, pa), (b, pb) in zip(self.knots, self.knots[1:]):
            if a <= t <= b:
                return pa + (pb - pa) * (t - a) / (b - a)
        raise AssertionError("unreachable")

    def omega(self, x: float) -> float:
        """omega(x) = phi(log x) for x >= 1, else 0."""
        if x <= 1.0:
            return 0.0
        return float(self.phi(_F(math.log(x)).limit_denominator(10 ** 12)))

    @property
    def horizon(self) -> Fraction:
        """Largest slope u for which the conjugate is trustworthy."""
        return self.tail_slope


@dataclass(frozen=True)
class ConjugateFunction:
    """Exact PL Young conjugate; valid for u in [0, horizon]."""

    knots: tuple[tuple[Fraction, Fraction], ...]
    horizon: Fraction

    def value(self, u) -> Fraction:
        u = _F(u)
        if u < 0:
            raise ValueError("conjugate evaluated at negative slope")
        if u > self.horizon:
            raise ValueError(f"u={float(u):g} beyond conjugate horizon "
                             f"{float(self.horizon):g}")
        for (a, pa), (b, pb) in zip(self.knots, self.knots[1:]):
            if a <= u <= b:
                return pa + (pb - pa) * (u - a) / (b - a)
        a, pa = self.knots[-1]
        return pa  # u == horizon == last knot
    __call__ = value


def make_weight_function(knots: Sequence[Sequence], tail_slope,
                         family: Optional[dict] = None,
                         label: str = "omega") -> WeightFunction:
    fam = None
    if family:
        if family.get("kind") != "power":
            raise ValueError(f"unknown family {family!r}")
        fam = PowerFamily(float(family["s"]))
    return WeightFunction(tuple(((_F(t), _F(p))) for t, p in knots),
                          _F(tail_slope), fam, label)


def power_weight(s: float, knot_count: int = 64, t_max: float = 32.0,
                 label: Optional[str] = None) -> WeightFunction:
    """PL sample of phi(t) = e^(t/s) on [0, t_max], closed form attached.

    The sampled carrier is shifted by -1 so phi(0) = 0 holds; the attached
    family keeps the unshifted closed forms for oracle comparison.
    """
    if s <= 0:
        raise ValueError("power index must be positive")
    fam = PowerFamily(s)
    ts = np.linspace(0.0, t_max, knot_count + 1)
    knots = tuple((_F(t).limit_denominator(10 ** 9),
                   _F(math.exp(t / s)).limit_denominator(10 ** 9))
                  for t in ts)
    lt, lp = knots[-2], knots[-1]
    tail = (lp[1] - lt[1]) / (lp[0] - lt[0])
    return WeightFunction(knots, tail, fam, label or f"power[{s:g}]")


def young_conjugate(w: WeightFunction) -> ConjugateFunction:
    """Exact conjugate phi*(u) = sup_t (u t - phi(t)), u in [0, tail_slope].

    For u between consecutive slopes the sup sits at the knot separating
    them, so the conjugate's knots are (slope_i, u t_i - phi_i): slopes and
    breakpoints swap roles.
    """
    ok, bad = w.is_convex()
    if not ok:
        raise ValueError(f"carrier not convex at segment {bad}")
    slopes = w.slopes()
    cknots: list[tuple[Fraction, Fraction]] = [(_F(0), -w.knots[0][1])]
    for i, (t, p) in enumerate(w.knots):
        u = slopes[i]  # slope to the right of knot i
        val = u * t - p
        if cknots and cknots[-1][0] == u:
            # repeated slope (flat segment of the conjugate); keep the sup
            if val > cknots[-1][1]:
                cknots[-1] = (u, val)
            continue
        cknots.append((u, val))
    # drop a duplicate origin when the first segment has slope 0
    dedup = [cknots[0]]
    for k in cknots[1:]:
        if k[0] > dedup[-1][0]:
            dedup.append(k)
        elif k[1] > dedup[-1][1]:
            dedup[-1] = k
    return ConjugateFunction(tuple(dedup), w.tail_slope)


def conjugate_back(c: ConjugateFunction, tail_slope: Fraction) -> WeightFunction:
    """phi** from a conjugate, for duality testing."""
    pts: list[tuple[Fraction, Fraction]] = []
    slopes: list[Fraction] = []
    for (a, pa), (b, pb) in zip(c.knots, c.knots[1:]):
        slopes.append((pb - pa) / (b - a))
    # conjugate of the conjugate: same knot swap in reverse
    kk: list[tuple[Fraction, Fraction]] = [(_F(0), _F(0))]
    for i in range(len(c.knots) - 1):
        u, val = c.knots[i + 1]
        t = slopes[i]
        kk.append((t, u * t - val))
    dedup = [kk[0]]
    for k in kk[1:]:
        if k[0] > dedup[-1][0]:
            dedup.append(k)
    return WeightFunction(tuple(dedup), tail_slope)


# ---------------------------------------------------------------------------
# condition checkers


def _t_grid(cfg: RunConfig, n: int = 12) -> list[float]:
    return [float(2 ** i) for i in range(1, n + 1)]


def check_omega_conditions(w: WeightFunction,
                           cfg: RunConfig = DEFAULT_CONFIG) -> dict[str, Verdict]:
    """Verdicts for doubling control, log domination, convexity, O(t), o(t)."""
    if len(w.knots) < 3:
        raise ValueError("need at least 3 knots")
    out: dict[str, Verdict] = {}
    grid = _t_grid(cfg)

    ok, bad = w.is_convex()
    if ok:
        out["omega3"] = Verdict(Status.HOLDS_UP_TO, len(w.knots), (), 0.0,
                                note="slopes nondecreasing, exact")
    else:
        out["omega3"] = Verdict(Status.REFUTED, len(w.knots), (), math.inf,
                                witness=(bad, float(w.slopes()[bad])),
                                note="decreasing slope pair")

    # doubling: omega(2t)/omega(t) bounded
    pts = []
    sup = 0.0
    for t in grid:
        den = w.omega(t)
        if den <= 0:
            continue
        sup = max(sup, w.omega(2 * t) / den)
        pts.append((int(t), sup))
    out["omega1"] = _family_override(w, "omega1",
                                     bounded_verdict(pts, int(grid[-1]), cfg,
                                                     note="doubling ratio"))

    # log domination: log t / omega(t) -> 0
    pts = [(int(t), math.log(t) / w.omega(t)) for t in grid if w.omega(t) > 0]
    out["omega2"] = _family_override(w, "omega2",
                                     to_zero_verdict(pts, int(grid[-1]), cfg,
                                                     note="log t over omega"))

    # omega(t) = O(t) and omega(t) = o(t)
    pts = []
    sup = 0.0
    for t in grid:
        sup = max(sup, w.omega(t) / t)
        pts.append((int(t), sup))
    out["big_O_t"] = _family_override(w, "big_O_t",
                                      bounded_verdict(pts, int(grid[-1]), cfg,
                                                      note="omega over t, running sup"))
    pts = [(int(t), w.omega(t) / t) for t in grid]
    out["little_o_t"] = _family_override(w, "little_o_t",
                                         to_zero_verdict(pts, int(grid[-1]), cfg,
                                                         note="omega over t"))
    return out


def _family_override(w: WeightFunction, cond: str, v: Verdict) -> Verdict:
    if w.family is None:
        return v
    s = w.family.s
    known = {
        "omega1": Status.HOLDS_UP_TO,
        "omega2": Status.HOLDS_UP_TO,
        "big_O_t": Status.HOLDS_UP_TO if s >= 1 else Status.REFUTED,
        "little_o_t": Status.HOLDS_UP_TO if s > 1 else Status.REFUTED,
    }[cond]
    if known is v.status:
        return v
    wit = v.witness
    if known is Status.REFUTED and wit is None:
        wit = v.checkpoints[-1] if v.checkpoints else (0, math.nan)
    return Verdict(known, v.truncation, v.checkpoints, v.constant_estimate,
                   witness=wit, note=(v.note + "; family closed form").strip("; "))


def check_thm3_condition(w: WeightFunction,
                         cfg: RunConfig = DEFAULT_CONFIG) -> Verdict:
    """sup over lambda >= 1, t of omega(lambda t)/(lambda omega(t)) bounded.

    The lambda range widens with the checkpoint (lambda <= min(t, 2^10)) so
    a superlinear weight shows a growing sup rather than an early plateau.
    """
    grid = _t_grid(cfg)
    pts = []
    sup = 0.0
    for t in grid:
        den = w.omega(t)
        if den <= 0:
            pts.append((int(t), sup))
            continue
        lam = 1.0
        while lam <= min(t, 1024.0):
            sup = max(sup, w.omega(lam * t) / (lam * den))
            lam *= 2.0
        pts.append((int(t), sup))
    return bounded_verdict(pts, int(grid[-1]), cfg, note="linear dilation ratio")


def check_subadditive(w: WeightFunction,
                      cfg: RunConfig = DEFAULT_CONFIG) -> Verdict:
    """omega(a + b) <= omega(a) + omega(b) over a geometric pair grid."""
    grid = _t_grid(cfg)
    pts = []
    sup = 0.0
    worst = None
    for a in grid:
        for b in grid:
            if b > a:
                continue
            den = w.omega(a) + w.omega(b)
            if den <= 0:
                continue
            r = w.omega(a + b) / den
            if worst is None or r > worst[2]:
                worst = (a, b, r)
            sup = max(sup, r)
        pts.append((int(a), sup))
    K = int(grid[-1])
    # a single ratio above 1 already disproves the pointwise inequality
    if sup > 1.0 + 1e-9:
        return Verdict(Status.REFUTED, K, tuple(pts), sup,
                       witness=worst, note="witness (a, b, ratio)")
    return Verdict(Status.HOLDS_UP_TO, K, tuple(pts), sup,
                   note="ratio never exceeds 1 on the grid")


# ---------------------------------------------------------------------------
# the associated matrix and seminorms


def omega_log_row(w: WeightFunction, rho: float, K: int) -> tuple[np.ndarray, int]:
    """(log Omega^rho_k for k = 0..K_eff, K_eff) with per-rho truncation.

    Omega^rho_k = exp(phi*(rho k)/rho)/k!; indices with rho k beyond the
    conjugate horizon are cut off rather than extrapolated.
    """
    conj = young_conjugate(w)
    k_eff = min(K, int(math.floor(float(conj.horizon) / rho)))
    if k_eff < 2:
        raise ValueError(f"horizon admits only {k_eff} orders at rho={rho:g}")
    rho_f = _F(rho).limit_denominator(10 ** 9)
    out = np.empty(k_eff + 1)
    out[0] = 0.0
    for k in range(1, k_eff + 1):
        val = conj.value(rho_f * k) / rho_f
        out[k] = float(val) - math.lgamma(k + 1)
    return out, k_eff


def omega_matrix(w: WeightFunction, rho_list: Sequence[float], K: int):
    """Weight matrix {Omega^rho} indexed by rho, with truncation warnings."""
    from .matrices import WeightMatrix  # local import to avoid a cycle
    rows = []
    warnings = []
    for rho in sorted(rho_list):
        lt, k_eff = omega_log_row(w, rho, K)
        if k_eff < K:
            warnings.append(f"rho={rho:g}: truncated to K={k_eff} by horizon")
        rows.append(WeightSequence(f"{w.label}|rho={rho:g}", lt,
                                   weakly_log_convex=True))
    k_min = min(r.K for r in rows)
    rows = [r.truncated(k_min) for r in rows]
    return WeightMatrix(tuple(sorted(rho_list)), tuple(rows),
                        label=f"Omega[{w.label}]", warnings=tuple(warnings))


def seminorm_omega(jet, w: WeightFunction, rho: float) -> float:
    """sup_k |f^(k)(0)| exp(-phi*(rho k)/rho); raises past the horizon."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    conj = young_conjugate(w)
    coeffs = jet.float_coefficients() if hasattr(jet, "float_coefficients") else list(jet)
    rho_f = _F(rho).limit_denominator(10 ** 9)
    best = 0.0
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        weight = float(conj.value(rho_f * k) / rho_f)
        val = math.log(abs(float(c))) + math.lgamma(k + 1) - weight
        best = max(best, math.exp(val)) if best else math.exp(val)
    return best
