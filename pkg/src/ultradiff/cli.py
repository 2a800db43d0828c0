"""Command-line front door.

Subcommands: seq, matrix, omega, fdb, bounds, oracle, pipeline.  Exit
codes: 0 the checked property holds (or the pipeline's verification
passes), 1 it is refuted (or a pipeline stage fails), 2 the trend is
inconclusive, 3 usage or input error.  Reports are byte-deterministic
for identical inputs and configuration.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as uio
from .bounds import (BoundCertificate, crosscheck_bound, inverse_fn_bound,
                     lemma4_construct, neumann_inverse_bound,
                     ode_bound_roumieu, rescale_for_neumann)
from .composition import check_fdb_property, m_circ_dp
from .config import DEFAULT_CONFIG, RunConfig
from .jets import (Jet, exp_jet, geometric_jet, growth_profile,
                   jet_compose, jet_from_function, jet_functional_inverse,
                   jet_mul, jet_ode_solve, jet_reciprocal)
from .matrices import (CONDITIONS, WeightMatrix, build_remark2,
                       check_matrix_condition, verify_lemma1)
from .sequences import (WeightSequence, check_almost_increasing,
                        check_growth, check_weakly_log_convex,
                        compare_inclusion, make_appendix_a, make_gevrey,
                        make_sawtooth, from_log_terms)
from .verdicts import Status, Verdict
from .weight_functions import (check_omega_conditions, check_subadditive,
                               check_thm3_condition, omega_matrix,
                               power_weight, young_conjugate)

EXIT_HOLDS, EXIT_REFUTED, EXIT_ESTIMATE, EXIT_USAGE = 0, 1, 2, 3

_STATUS_EXIT = {Status.HOLDS_UP_TO: EXIT_HOLDS,
                Status.REFUTED: EXIT_REFUTED,
                Status.ESTIMATE: EXIT_ESTIMATE}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input resolution


def _resolve_sequence(args, cfg: RunConfig) -> WeightSequence:
    if getattr(args, "file", None):
        return uio.load_sequence(args.file)
    fam = getattr(args, "family", None)
    if fam is None:
        raise UsageError("give either --file or --family")
    K = cfg.truncation
    if fam == "gevrey":
        return make_gevrey(args.s if args.s is not None else 1.0, K)
    if fam in ("appendix-a", "appendix_a"):
        return make_appendix_a(K)
    if fam == "sawtooth":
        return make_sawtooth(min(K, 512))
    if fam == "ones":
        return from_log_terms("ones", np.zeros(min(K, 512) + 1),
                              weakly_log_convex=True)
    raise UsageError(f"unknown family {fam!r}")


def _seq_check(seq: WeightSequence, name: str, cfg: RunConfig,
               sparse_witness: bool) -> Verdict:
    if name in ("log-convex", "weakly-log-convex"):
        return check_weakly_log_convex(seq, cfg)
    if name == "almost-increasing":
        return check_almost_increasing(seq, cfg, sparse_witness)
    if name in ("derivation-closed", "liminf-root-positive",
                "root-to-infinity"):
        return check_growth(seq, name.replace("-", "_"), cfg)
    if name == "fdb":
        return check_fdb_property(seq, cfg)
    raise UsageError(f"unknown check {name!r}")


def _emit(payload: dict, cfg: RunConfig, args,
          csv_rows: tuple = None) -> None:
    if cfg.output_format == "csv" and csv_rows is not None:
        text = uio.csv_report(csv_rows[0], csv_rows[1], cfg)
    else:
        text = uio.json_report(payload, cfg)
    uio.write_report(text, getattr(args, "out", None))


# ---------------------------------------------------------------------------
# subcommand handlers (each returns an exit code)


def cmd_seq(args, cfg: RunConfig) -> int:
    if args.action == "check":
        seq = _resolve_sequence(args, cfg)
        v = _seq_check(seq, args.check, cfg, args.sparse_witness)
        _emit({"command": "seq check", "label": seq.label,
               "check": args.check, "verdict": v}, cfg, args)
        return _STATUS_EXIT[v.status]
    if args.action == "compare":
        left = uio.load_sequence(args.left)
        right = uio.load_sequence(args.right)
        v = compare_inclusion(left, right, args.relation, cfg)
        _emit({"command": "seq compare", "left": left.label,
               "right": right.label, "relation": args.relation,
               "verdict": v}, cfg, args)
        return _STATUS_EXIT[v.status]
    raise UsageError(f"unknown seq action {args.action!r}")


def cmd_fdb(args, cfg: RunConfig) -> int:
    seq = _resolve_sequence(args, cfg)
    K = min(seq.K, cfg.dp_cap)
    v = check_fdb_property(seq, cfg)
    circ = m_circ_dp(seq, K, cfg)
    rows = [(k, float(seq.log_terms[k]), float(circ[k]),
             math.exp((circ[k] - seq.log_terms[k]) / k) if k else 1.0)
            for k in range(K + 1)]
    _emit({"command": "fdb", "label": seq.label, "verdict": v},
          cfg, args, csv_rows=(("k", "log_Mk", "log_Mcirc_k", "stat"), rows))
    return _STATUS_EXIT[v.status]


def cmd_matrix(args, cfg: RunConfig) -> int:
    mat = uio.load_matrix(args.file)
    if args.action == "check":
        names = CONDITIONS if args.condition == "all" else (args.condition,)
        results = {}
        worst = EXIT_HOLDS
        for name in names:
            if name not in CONDITIONS:
                raise UsageError(f"unknown condition {name!r}")
            mv = check_matrix_condition(mat, name, cfg)
            results[name] = mv
            worst = max(worst, _STATUS_EXIT[mv.status])
        _emit({"command": "matrix check", "label": mat.label,
               "results": results}, cfg, args)
        return worst
    if args.action == "lemma1":
        rep = verify_lemma1(mat, args.variant, cfg)
        _emit({"command": "matrix lemma1", "label": mat.label,
               "report": rep}, cfg, args)
        violated = "violated" in (rep.fdb_from_rai_dc, rep.rai_from_fdb_h)
        return EXIT_REFUTED if violated else EXIT_HOLDS
    raise UsageError(f"unknown matrix action {args.action!r}")


def _resolve_weight_function(args, cfg: RunConfig):
    if getattr(args, "file", None):
        return uio.load_weight_function(args.file)
    if getattr(args, "family", None) == "power":
        return power_weight(args.s if args.s is not None else 1.0)
    raise UsageError("give --file or --family power --s S")


def cmd_omega(args, cfg: RunConfig) -> int:
    w = _resolve_weight_function(args, cfg)
    if args.action == "check":
        if args.check == "thm3":
            results = {"thm3": check_thm3_condition(w, cfg)}
        elif args.check == "subadditive":
            results = {"subadditive": check_subadditive(w, cfg)}
        else:
            all_res = check_omega_conditions(w, cfg)
            if args.check == "all":
                results = all_res
            elif args.check in all_res:
                results = {args.check: all_res[args.check]}
            else:
                raise UsageError(f"unknown omega check {args.check!r}")
        worst = max(_STATUS_EXIT[v.status] for v in results.values())
        _emit({"command": "omega check", "label": w.label,
               "results": results}, cfg, args)
        return worst
    if args.action == "conjugate":
        c = young_conjugate(w)
        payload = {"command": "omega conjugate", "label": w.label,
                   "knots": [[uio._num_to_json(t), uio._num_to_json(v)]
                             for t, v in c.knots],
                   "horizon": uio._num_to_json(c.horizon)}
        _emit(payload, cfg, args)
        return EXIT_HOLDS
    raise UsageError(f"unknown omega action {args.action!r}")


def cmd_oracle(args, cfg: RunConfig) -> int:
    if args.action == "compose":
        f, g = uio.load_jet(args.f), uio.load_jet(args.g)
        out = jet_compose(f, g)
    elif args.action == "inverse":
        out = jet_functional_inverse(uio.load_jet(args.f))
    elif args.action == "reciprocal":
        out = jet_reciprocal(uio.load_jet(args.f))
    elif args.action == "ode":
        out = _builtin_ode(args.field, cfg, args.K or 40)
    elif args.action == "growth":
        jet = uio.load_jet(args.f)
        seq = uio.load_sequence(args.seq)
        rhos = [float(r) for r in args.rhos.split(",")]
        pareto = growth_profile(jet, seq, rhos)
        _emit({"command": "oracle growth",
               "pareto": [{"rho": r, "C": c} for r, c in pareto]},
              cfg, args, csv_rows=(("rho", "C"), pareto))
        return EXIT_HOLDS
    else:
        raise UsageError(f"unknown oracle action {args.action!r}")
    if args.out:
        uio.save_jet(out, args.out)
    else:
        print(uio.json_report({"jet": uio.jet_to_dict(out)}, cfg), end="")
    return EXIT_HOLDS


def _builtin_ode(field_name: str, cfg: RunConfig, K: int) -> Jet:
    if field_name == "xsq":
        # x' = x^2, x(0) = 1; field in powers of (x - 1) and t
        field = [[Fraction(1)], [Fraction(2)], [Fraction(1)]]
        return jet_ode_solve(field, Fraction(1), K, cfg.mode)
    raise UsageError(f"unknown built-in field {field_name!r}")


def cmd_bounds(args, cfg: RunConfig) -> int:
    if args.action != "crosscheck":
        raise UsageError(f"unknown bounds action {args.action!r}")
    cert_obj = uio._load_json(args.cert)
    if isinstance(cert_obj, dict) and "certificate" in cert_obj:
        cert_obj = cert_obj["certificate"]
    seq = uio.load_sequence(args.seq)
    if seq.label != cert_obj.get("sequence_label"):
        raise UsageError("sequence file does not match certificate label")
    cert = BoundCertificate(float(cert_obj["C"]), float(cert_obj["rho"]),
                            seq, cert_obj.get("shift", "none"),
                            cert_obj.get("kind", "function"))
    jet = uio.load_jet(args.jet)
    rep = crosscheck_bound(cert, jet)
    rows = [(k, lb, lo) for k, lb, lo in rep["rows"]]
    _emit({"command": "bounds crosscheck", "dominates": rep["dominates"],
           "first_violation": rep["first_violation"],
           "worst_log_margin": rep["worst_log_margin"]},
          cfg, args, csv_rows=(("k", "log_bound", "log_oracle"), rows))
    return EXIT_HOLDS if rep["dominates"] else EXIT_REFUTED


# ---------------------------------------------------------------------------
# pipelines


def _artifact_path(args, name: str) -> Path:
    base = Path(args.out) if getattr(args, "out", None) else Path(".")
    if base.suffix:  # --out was a file: use its directory
        base = base.parent
    return base / name


def pipe_omega_matrix(args, cfg: RunConfig) -> int:
    w = _resolve_weight_function(args, cfg)
    rhos = [float(r) for r in (args.rhos or "0.5,1,2").split(",")]
    K = min(cfg.truncation, 400)
    mat = omega_matrix(w, rhos, K)
    uio.save_matrix(mat, _artifact_path(args, "omega_matrix.json"))
    mono = all(np.all(mat.row(mat.lambdas[i]).log_terms
                      <= mat.row(mat.lambdas[i + 1]).log_terms + 1e-12)
               for i in range(len(mat.lambdas) - 1))
    _emit({"command": "pipeline omega-matrix", "rhos": rhos,
           "monotone_in_rho": mono, "warnings": list(mat.warnings),
           "K": mat.K}, cfg, args)
    return EXIT_HOLDS if mono else EXIT_REFUTED


def pipe_remark2(args, cfg: RunConfig) -> int:
    kind = {"1": "beurling_not_roumieu", "2": "roumieu_not_beurling",
            "beurling_not_roumieu": "beurling_not_roumieu",
            "roumieu_not_beurling": "roumieu_not_beurling"}.get(args.kind)
    if kind is None:
        raise UsageError(f"unknown remark2 kind {args.kind!r}")
    K = min(cfg.truncation, cfg.dp_cap)
    mat = build_remark2(kind, K, cfg)
    uio.save_matrix(mat, _artifact_path(args, f"remark2_{args.kind}.json"))
    res = {name: check_matrix_condition(mat, name, cfg, sparse_probes=True)
           for name in ("rai_R", "rai_B")}
    _emit({"command": "pipeline remark2", "kind": kind, "results": res},
          cfg, args)
    want = (("rai_B", Status.HOLDS_UP_TO), ("rai_R", Status.REFUTED)) \
        if kind == "beurling_not_roumieu" else \
        (("rai_R", Status.HOLDS_UP_TO), ("rai_B", Status.REFUTED))
    ok = all(res[name].status is st for name, st in want)
    return EXIT_HOLDS if ok else EXIT_REFUTED


def _finish_bound_pipeline(name: str, cert: BoundCertificate, rep: dict,
                           args, cfg: RunConfig) -> None:
    stem = name.replace("-", "_")
    uio.write_report(uio.json_report({"certificate": cert}, cfg),
                     _artifact_path(args, f"{stem}_certificate.json"))
    uio.save_sequence(cert.sequence,
                      _artifact_path(args, f"{stem}_sequence.json"))
    rows = [(k, lb, lo) for k, lb, lo in rep["rows"]]
    _emit({"command": f"pipeline {name}", "certificate": cert,
           "dominates": rep["dominates"],
           "first_violation": rep["first_violation"],
           "worst_log_margin": rep["worst_log_margin"]},
          cfg, args, csv_rows=(("k", "log_bound", "log_oracle"), rows))


def pipe_ode_bound(args, cfg: RunConfig) -> int:
    if (args.field or "xsq") != "xsq":
        raise UsageError("only the built-in field xsq is available")
    K = args.K or 40
    jet = _builtin_ode("xsq", cfg, K)
    ones = from_log_terms("ones", np.zeros(K + 2), weakly_log_convex=True)
    cert = BoundCertificate(2.0, 1.0, ones, "minus_one", "ode_field")
    res = ode_bound_roumieu(cert, A=2.0, cfg=cfg)
    rep = crosscheck_bound(res.certificate, jet)
    _finish_bound_pipeline("ode-bound", res.certificate, rep, args, cfg)
    return EXIT_HOLDS if rep["dominates"] else EXIT_REFUTED


def pipe_inverse_bound(args, cfg: RunConfig) -> int:
    K = args.K or 25
    f = jet_from_function([Fraction(0), Fraction(1), Fraction(1)]
                          + [Fraction(0)] * max(0, K - 2))
    g = jet_functional_inverse(f)
    ones = from_log_terms("ones", np.zeros(K + 2), weakly_log_convex=True)
    cert = BoundCertificate(1.0, 1.0, ones, "minus_one", "function")
    res = inverse_fn_bound(cert, A=2.0, cfg=cfg)
    rep = crosscheck_bound(res.certificate, g)
    _finish_bound_pipeline("inverse-bound", res.certificate, rep, args, cfg)
    return EXIT_HOLDS if rep["dominates"] else EXIT_REFUTED


def pipe_neumann_bound(args, cfg: RunConfig) -> int:
    K = args.K or 60
    ones = from_log_terms("ones", np.zeros(K + 1), weakly_log_convex=True)
    A = args.A or 2.0
    cert = BoundCertificate(args.C or 0.25, 1.0, ones, "none", "function")
    cert = rescale_for_neumann(cert, A)
    res = neumann_inverse_bound(cert, A, K=K, cfg=cfg)
    simp = res.certificate
    rows = [(k, res.log_exact[k] + math.lgamma(k + 1), simp.log_bound(k))
            for k in range(len(res.log_exact))]
    ok = all(b + 1e-9 >= e for _, e, b in rows)
    _emit({"command": "pipeline neumann-bound",
           "certificate": simp, "simplified_dominates_exact": ok},
          cfg, args, csv_rows=(("k", "log_exact", "log_simplified"), rows))
    uio.write_report(uio.json_report({"certificate": simp}, cfg),
                     _artifact_path(args, "neumann_certificate.json"))
    return EXIT_HOLDS if ok else EXIT_REFUTED


def pipe_lemma4(args, cfg: RunConfig) -> int:
    K = min(cfg.truncation, 256)
    M1 = make_gevrey(1.0, K)
    M2 = make_gevrey(2.0, K)
    M3 = make_gevrey(3.0, K)
    L = [0.0] * (K + 1)
    res = lemma4_construct(L, M1, M2, M3, H1=1.0, cfg=cfg)
    uio.save_sequence(res.N1, _artifact_path(args, "lemma4_N1.json"))
    uio.save_sequence(res.N2, _artifact_path(args, "lemma4_N2.json"))
    ok = (res.sandwich_ok and res.gap_constant <= math.sqrt(1.0) + 1e-12
          and res.strict_inclusion.status is Status.HOLDS_UP_TO)
    _emit({"command": "pipeline lemma4", "report": res}, cfg, args)
    return EXIT_HOLDS if ok else EXIT_REFUTED


def pipe_oracle_crosscheck(args, cfg: RunConfig) -> int:
    rng = random.Random(cfg.seed)
    K = 10
    checks = {}
    # composition against jets with random rational coefficients
    ok = True
    for _ in range(20):
        f = jet_from_function([Fraction(rng.randint(-4, 4),
                                        rng.randint(1, 4))
                               for _ in range(K + 1)])
        g_coeffs = [Fraction(0)] + [Fraction(rng.randint(-4, 4),
                                             rng.randint(1, 4))
                                    for _ in range(K)]
        g = jet_from_function(g_coeffs)
        lhs = jet_compose(f, g)
        rhs = jet_add_scaled_powers(f, g, K)
        ok = ok and lhs.coefficients == rhs.coefficients
    checks["compose_vs_powers"] = ok
    # ODE solution of x' = x^2 is the geometric jet
    checks["ode_xsq_geometric"] = (
        _builtin_ode("xsq", cfg, 40).coefficients
        == geometric_jet(40).coefficients)
    # reciprocal via division equals reciprocal via the ODE reduction
    e = exp_jet(30)
    checks["reciprocal_vs_ode"] = (_reciprocal_via_ode(e).coefficients
                                   == jet_reciprocal(e).coefficients)
    all_ok = all(checks.values())
    _emit({"command": "pipeline oracle-crosscheck", "checks": checks},
          cfg, args)
    return EXIT_HOLDS if all_ok else EXIT_REFUTED


def jet_add_scaled_powers(f: Jet, g: Jet, K: int) -> Jet:
    """f(g(t)) evaluated as sum_k c_k g^k, the independent composition."""
    acc = [Fraction(0)] * (K + 1)
    pw = Jet((Fraction(1),) + (Fraction(0),) * K)
    for c in f.coefficients:
        for i, p in enumerate(pw.coefficients[:K + 1]):
            acc[i] += c * p
        pw = jet_mul(pw, g).truncated(K)
    return Jet(tuple(acc))


def _reciprocal_via_ode(f: Jet) -> Jet:
    """1/f via x' = -f'(t) x^2, x(0) = 1/f(0)."""
    K = f.order
    x0 = 1 / f[0]
    fp = [f[b + 1] * (b + 1) for b in range(K)]
    # x^2 = (x0 + u)^2: field rows scale -f'(t) by x0^2, 2 x0, 1
    field = [[-x0 * x0 * c for c in fp],
             [-2 * x0 * c for c in fp],
             [-c for c in fp]]
    return jet_ode_solve(field, x0, K)


PIPELINES = {
    "omega-matrix": pipe_omega_matrix,
    "remark2": pipe_remark2,
    "ode-bound": pipe_ode_bound,
    "inverse-bound": pipe_inverse_bound,
    "neumann-bound": pipe_neumann_bound,
    "lemma4": pipe_lemma4,
    "oracle-crosscheck": pipe_oracle_crosscheck,
}


def cmd_pipeline(args, cfg: RunConfig) -> int:
    fn = PIPELINES.get(args.name)
    if fn is None:
        raise UsageError(f"unknown pipeline {args.name!r}; choose from "
                         + ", ".join(sorted(PIPELINES)))
    return fn(args, cfg)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--K", type=int, default=None, help="truncation")
    p.add_argument("--dp-cap", type=int, default=None)
    p.add_argument("--mode", choices=("exact", "float"), default=None)
    p.add_argument("--out", default=None, help="report/artifact path")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--seed", type=int, default=None)


def _add_seq_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", default=None, help="sequence JSON file")
    p.add_argument("--family",
                   choices=("gevrey", "appendix-a", "sawtooth", "ones"),
                   default=None)
    p.add_argument("--s", type=float, default=None, help="family parameter")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ultradiff",
        description="stability conditions for derivative-growth classes")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="sequence checks and comparisons")
    p.add_argument("action", choices=("check", "compare"))
    _add_seq_source(p)
    p.add_argument("--check", default="almost-increasing")
    p.add_argument("--sparse-witness", action="store_true")
    p.add_argument("--left", default=None)
    p.add_argument("--right", default=None)
    p.add_argument("--relation", choices=("<=", "<<"), default="<=")
    _add_common(p)

    p = sub.add_parser("fdb", help="composition stability statistic")
    _add_seq_source(p)
    _add_common(p)

    p = sub.add_parser("matrix", help="matrix condition checks")
    p.add_argument("action", choices=("check", "lemma1"))
    p.add_argument("--file", required=True)
    p.add_argument("--condition", default="all")
    p.add_argument("--variant", choices=("roumieu", "beurling"),
                   default="roumieu")
    _add_common(p)

    p = sub.add_parser("omega", help="weight-function checks")
    p.add_argument("action", choices=("check", "conjugate"))
    p.add_argument("--file", default=None)
    p.add_argument("--family", choices=("power",), default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--check", default="all")
    _add_common(p)

    p = sub.add_parser("oracle", help="exact jet arithmetic")
    p.add_argument("action", choices=("compose", "inverse", "reciprocal",
                                      "ode", "growth"))
    p.add_argument("--f", default=None, help="jet JSON file")
    p.add_argument("--g", default=None, help="second jet JSON file")
    p.add_argument("--field", default="xsq")
    p.add_argument("--seq", default=None)
    p.add_argument("--rhos", default="1")
    _add_common(p)

    p = sub.add_parser("bounds", help="certificate crosschecks")
    p.add_argument("action", choices=("crosscheck",))
    p.add_argument("--cert", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--jet", required=True)
    _add_common(p)

    p = sub.add_parser("pipeline", help="end-to-end constructions")
    p.add_argument("name")
    p.add_argument("--family", choices=("power",), default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--rhos", default=None)
    p.add_argument("--kind", default="1")
    p.add_argument("--field", default=None)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--demo", action="store_true")
    p.add_argument("--file", default=None)
    _add_common(p)

    return top


def _config_from_args(args) -> RunConfig:
    cfg = DEFAULT_CONFIG
    updates = {}
    if args.K is not None:
        updates["truncation"] = args.K
    if args.dp_cap is not None:
        updates["dp_cap"] = args.dp_cap
    if args.mode is not None:
        updates["mode"] = args.mode
    if args.format is not None:
        updates["output_format"] = args.format
    if args.seed is not None:
        updates["seed"] = args.seed
    return cfg.with_(**updates) if updates else cfg


HANDLERS = {"seq": cmd_seq, "fdb": cmd_fdb, "matrix": cmd_matrix,
            "omega": cmd_omega, "oracle": cmd_oracle, "bounds": cmd_bounds,
            "pipeline": cmd_pipeline}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        cfg = _config_from_args(args)
        return HANDLERS[args.command](args, cfg)
    except (UsageError, uio.FileFormatError, FileNotFoundError,
            IsADirectoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
