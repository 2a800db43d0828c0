"""Weight matrices and their stability conditions.

A weight matrix is a finite ordered family of weight sequences.  Each
condition has a Roumieu form (suffix _R) and a Beurling form (suffix _B);
the two differ in which side of the inequality carries the searched row.
Every "for all rows there is a row" quantifier is resolved by exhaustive
search, and the verdict records the chosen witness row per input row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .composition import m_circ_dp
from .config import RunConfig, DEFAULT_CONFIG, checkpoints
from .logutil import UnrepresentableError
from .sequences import (WeightSequence, adjust_prefix_max, make_appendix_a,
                        make_gevrey, sparse_probe_indices)
from .verdicts import Status, Verdict, bounded_verdict

CONDITIONS = ("H", "Cw_R", "Cw_B", "dc_R", "dc_B", "rai_R", "rai_B",
              "FdB_R", "FdB_B")


@dataclass(frozen=True)
class WeightMatrix:
    lambdas: tuple[float, ...]
    rows: tuple[WeightSequence, ...]
    label: str = "matrix"
    warnings: tuple[str, ...] = ()
    adjusted_range: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        if len(self.lambdas) != len(self.rows) or not self.rows:
            raise ValueError("need one row per index")
        if list(self.lambdas) != sorted(self.lambdas):
            raise ValueError("row indices must be sorted")
        K = min(r.K for r in self.rows)
        rows = tuple(r if r.K == K else r.truncated(K) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for a, b in zip(rows, rows[1:]):
            if np.any(a.log_terms > b.log_terms + 1e-9):
                raise ValueError("rows must be pointwise nondecreasing in the index")

    @property
    def K(self) -> int:
        return self.rows[0].K

    def row(self, lam: float) -> WeightSequence:
        return self.rows[self.lambdas.index(lam)]


@dataclass(frozen=True)
class MatrixVerdict:
    """Aggregate verdict plus the witness row chosen for each input row."""

    condition: str
    verdict: Verdict
    witness_rows: dict = field(default_factory=dict)
    per_pair: dict = field(default_factory=dict)

    @property
    def status(self) -> Status:
        return self.verdict.status

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "verdict": self.verdict.to_dict(),
            "witness_rows": {str(k): v for k, v in self.witness_rows.items()},
        }


# ---------------------------------------------------------------------------
# pairwise statistics


def _rai_pair(left: WeightSequence, right: WeightSequence, cfg: RunConfig,
              sparse_probes: bool) -> Verdict:
    """Roots of `left` at j <= k against roots of `right` at k, sup bounded."""
    K = min(left.K, right.K)
    lr = left.log_terms[1:K + 1] / np.arange(1, K + 1)
    rr = right.log_terms[1:K + 1] / np.arange(1, K + 1)
    gap = np.maximum.accumulate(np.maximum.accumulate(lr) - rr)
    pts = [(c, float(np.exp(min(gap[c - 1], 700.0)))) for c in checkpoints(K, cfg)]
    witness = None
    if sparse_probes and left.sparse is not None and right.sparse is not None:
        witness = _pair_sparse_witness(left, right,
                                       math.log(cfg.refute_threshold))
    return bounded_verdict(pts, K, cfg, witness=witness,
                           witness_threshold=cfg.refute_threshold,
                           note="root gap")


def _pair_sparse_witness(left: WeightSequence, right: WeightSequence,
                         log_threshold: float) -> Optional[tuple]:
    probes = sparse_probe_indices()
    best = None
    for i, p in enumerate(probes):
        for q in probes[i:]:
            try:
                gap = left.log_root(p) - right.log_root(q)
            except (UnrepresentableError, IndexError, ValueError):
                continue
            if gap > log_threshold:
                return (p, q, math.exp(min(gap, 700.0)))
            if best is None or gap > best[2]:
                best = (p, q, gap)
    if best is None:
        return None
    return (best[0], best[1], math.exp(min(best[2], 700.0)))


def _dc_pair(top: WeightSequence, bottom: WeightSequence,
             cfg: RunConfig) -> Verdict:
    """top_{k+1} <= C^k bottom_k: statistic (top_{k+1}/bottom_k)^(1/k)."""
    K = min(top.K, bottom.K)
    k = np.arange(1, K)
    stat = np.exp((top.log_terms[2:K + 1] - bottom.log_terms[1:K]) / k)
    sups = np.maximum.accumulate(stat)
    pts = [(c, float(sups[c - 1])) for c in checkpoints(K - 1, cfg)]
    return bounded_verdict(pts, K, cfg, note="shift quotient")


def _fdb_pair(src: WeightSequence, dst: WeightSequence,
              cfg: RunConfig) -> Verdict:
    """(src)°_k <= C^k dst_k."""
    K = min(src.K, dst.K, cfg.dp_cap)
    log_mc = m_circ_dp(src, K, cfg)
    k = np.arange(1, K + 1)
    stat = np.exp((log_mc[1:] - dst.log_terms[1:K + 1]) / k)
    sups = np.maximum.accumulate(stat)
    pts = [(c, float(sups[c - 1])) for c in checkpoints(K, cfg)]
    return bounded_verdict(pts, K, cfg, note="composition excess")


def _row_liminf(row: WeightSequence, cfg: RunConfig) -> Verdict:
    from .sequences import check_growth
    return check_growth(row, "liminf_root_positive", cfg)


def _row_to_infinity(row: WeightSequence, cfg: RunConfig) -> Verdict:
    from .sequences import check_growth
    return check_growth(row, "root_to_infinity", cfg)


# ---------------------------------------------------------------------------
# quantifier resolution


def _forall_exists(mat: WeightMatrix, pair_fn, cfg: RunConfig,
                   condition: str) -> MatrixVerdict:
    """For every row lam, search the smallest row mu with a HOLDS verdict."""
    witness_rows: dict = {}
    per_pair: dict = {}
    statuses = []
    worst: Optional[Verdict] = None
    for lam in mat.lambdas:
        chosen = None
        for mu in mat.lambdas:
            v = pair_fn(lam, mu)
            per_pair[(lam, mu)] = v
            if v.status is Status.HOLDS_UP_TO and chosen is None:
                chosen = mu
        if chosen is not None:
            witness_rows[lam] = chosen
            statuses.append(Status.HOLDS_UP_TO)
            continue
        pair_vs = [per_pair[(lam, mu)] for mu in mat.lambdas]
        refuted = all(v.status is Status.REFUTED for v in pair_vs)
        statuses.append(Status.REFUTED if refuted else Status.ESTIMATE)
        rep = max(pair_vs, key=lambda v: v.constant_estimate)
        if worst is None or refuted:
            worst = rep
    if all(s is Status.HOLDS_UP_TO for s in statuses):
        agg_status = Status.HOLDS_UP_TO
    elif any(s is Status.REFUTED for s in statuses):
        agg_status = Status.REFUTED
    else:
        agg_status = Status.ESTIMATE
    base = worst if worst is not None else next(iter(per_pair.values()))
    agg = Verdict(agg_status, base.truncation, base.checkpoints,
                  max(v.constant_estimate for v in per_pair.values()),
                  witness=base.witness if agg_status is Status.REFUTED else None,
                  note=f"{condition}: quantifier over {len(mat.lambdas)} rows")
    return MatrixVerdict(condition, agg, witness_rows, per_pair)


def _all_rows(mat: WeightMatrix, row_fn, cfg: RunConfig,
              condition: str, exists: bool = False) -> MatrixVerdict:
    per = {lam: row_fn(mat.row(lam), cfg) for lam in mat.lambdas}
    sts = [v.status for v in per.values()]
    if exists:
        if any(s is Status.HOLDS_UP_TO for s in sts):
            agg_status = Status.HOLDS_UP_TO
        elif all(s is Status.REFUTED for s in sts):
            agg_status = Status.REFUTED
        else:
            agg_status = Status.ESTIMATE
    else:
        if all(s is Status.HOLDS_UP_TO for s in sts):
            agg_status = Status.HOLDS_UP_TO
        elif any(s is Status.REFUTED for s in sts):
            agg_status = Status.REFUTED
        else:
            agg_status = Status.ESTIMATE
    pick = next((v for v in per.values() if v.status is agg_status),
                next(iter(per.values())))
    agg = Verdict(agg_status, pick.truncation, pick.checkpoints,
                  max(v.constant_estimate for v in per.values()),
                  witness=pick.witness if agg_status is Status.REFUTED else None,
                  note=f"{condition}: per-row aggregation")
    wits = {lam: lam for lam, v in per.items() if v.status is Status.HOLDS_UP_TO}
    return MatrixVerdict(condition, agg, wits, {(lam, lam): v for lam, v in per.items()})


def check_matrix_condition(mat: WeightMatrix, condition: str,
                           cfg: RunConfig = DEFAULT_CONFIG,
                           sparse_probes: bool = False) -> MatrixVerdict:
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; "
                         f"choose from {CONDITIONS}")
    if condition == "H":
        return _all_rows(mat, _row_liminf, cfg, condition)
    if condition == "Cw_B":
        return _all_rows(mat, _row_to_infinity, cfg, condition)
    if condition == "Cw_R":
        return _all_rows(mat, _row_liminf, cfg, condition, exists=True)
    if condition == "rai_R":
        fn = lambda lam, mu: _rai_pair(mat.row(lam), mat.row(mu), cfg, sparse_probes)
    elif condition == "rai_B":
        if cfg.literal_rai_beurling:
            fn = lambda lam, mu: _rai_pair(mat.row(lam), mat.row(lam), cfg, sparse_probes)
        else:
            fn = lambda lam, mu: _rai_pair(mat.row(mu), mat.row(lam), cfg, sparse_probes)
    elif condition == "dc_R":
        fn = lambda lam, mu: _dc_pair(mat.row(lam), mat.row(mu), cfg)
    elif condition == "dc_B":
        fn = lambda lam, mu: _dc_pair(mat.row(mu), mat.row(lam), cfg)
    elif condition == "FdB_R":
        fn = lambda lam, mu: _fdb_pair(mat.row(lam), mat.row(mu), cfg)
    else:  # FdB_B
        fn = lambda lam, mu: _fdb_pair(mat.row(mu), mat.row(lam), cfg)
    return _forall_exists(mat, fn, cfg, condition)


# ---------------------------------------------------------------------------
# two-row counterexample constructions


def build_remark2(kind: str, K: int, cfg: RunConfig = DEFAULT_CONFIG) -> WeightMatrix:
    """Two-row matrices separating the Beurling and Roumieu conditions.

    beurling_not_roumieu: lower row a small Gevrey power, upper row the
    tower polygon (whose roots are not almost increasing).
    roumieu_not_beurling: lower row the tower polygon, upper row a Gevrey
    power large enough to dominate it.  Pointwise ordering is enforced by
    a prefix max adjustment whose range is recorded.
    """
    if K < 64:
        raise ValueError("need K >= 64")
    appa = make_appendix_a(K)
    if kind == "beurling_not_roumieu":
        low = make_gevrey(0.25, K)
        # the tower row starts below k!^{1/4} on a short prefix; lift it
        upper, thr = adjust_prefix_max(appa, low, label="appendix_a|lifted")
        return WeightMatrix((1.0, 2.0), (low, upper), label="remark2-kind1",
                            adjusted_range=(0, thr))
    if kind == "roumieu_not_beurling":
        high = make_gevrey(3.1, K)
        upper, thr = adjust_prefix_max(high, appa, label="gevrey[3.1]|lifted")
        return WeightMatrix((1.0, 2.0), (appa, upper), label="remark2-kind2",
                            adjusted_range=(0, thr))
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# implication report


@dataclass(frozen=True)
class ImplicationReport:
    variant: str  # "roumieu" | "beurling"
    premises: dict
    conclusion_fdb: MatrixVerdict
    conclusion_rai: MatrixVerdict
    fdb_from_rai_dc: str
    rai_from_fdb_h: str

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "statuses": {name: mv.status.value
                         for name, mv in {**self.premises,
                                          "FdB": self.conclusion_fdb,
                                          "rai": self.conclusion_rai}.items()},
            "rai_and_dc_imply_FdB": self.fdb_from_rai_dc,
            "FdB_and_H_imply_rai": self.rai_from_fdb_h,
        }


def _implication(premise_statuses: Sequence[Status], conclusion: Status) -> str:
    if all(s is Status.HOLDS_UP_TO for s in premise_statuses):
        if conclusion is Status.REFUTED:
            return "violated"
        if conclusion is Status.HOLDS_UP_TO:
            return "consistent"
        return "inconclusive"
    if any(s is Status.REFUTED for s in premise_statuses):
        return "consistent"
    if conclusion is Status.HOLDS_UP_TO:
        return "consistent"
    return "inconclusive"


def verify_lemma1(mat: WeightMatrix, variant: str = "roumieu",
                  cfg: RunConfig = DEFAULT_CONFIG,
                  sparse_probes: bool = False) -> ImplicationReport:
    """Finite-truncation consistency of the two stability implications.

    Checks that (rai and dc) imply FdB, and that (FdB and H) imply rai,
    in the requested quantifier variant.
    """
    suffix = "R" if variant == "roumieu" else "B"
    if variant not in ("roumieu", "beurling"):
        raise ValueError("variant must be roumieu or beurling")
    rai = check_matrix_condition(mat, f"rai_{suffix}", cfg, sparse_probes)
    dc = check_matrix_condition(mat, f"dc_{suffix}", cfg)
    fdb = check_matrix_condition(mat, f"FdB_{suffix}", cfg)
    h = check_matrix_condition(mat, "H", cfg)
    return ImplicationReport(
        variant,
        {"rai": rai, "dc": dc, "H": h},
        fdb, rai,
        _implication([rai.status, dc.status], fdb.status),
        _implication([fdb.status, h.status], rai.status),
    )
