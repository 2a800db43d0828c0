"""File formats and report emitters.

JSON object files (sequences, weight functions, matrices, jets,
certificates) and the two report shapes (JSON with a schema version and
the run config embedded; CSV with a versioned header line).  Loading is
strict: malformed JSON is reported with line and column, and schema
violations name the offending field.
"""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .config import RunConfig, DEFAULT_CONFIG
from .jets import Jet
from .matrices import WeightMatrix
from .sequences import WeightSequence, sparse_from_spec
from .weight_functions import WeightFunction, make_weight_function

SCHEMA_VERSION = "1"
CSV_HEADER_PREFIX = f"# ultradiff-csv v{SCHEMA_VERSION}"


class FileFormatError(ValueError):
    """A loadable file violated its schema (carries a human location)."""


def _load_json(path: Union[str, Path]) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc


def _require(obj: dict, key: str, path) -> object:
    if key not in obj:
        raise FileFormatError(f"{path}: missing field {key!r}")
    return obj[key]


# ---------------------------------------------------------------------------
# rationals: exact values travel as "p/q" strings, integers as numbers


def _num_to_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def _num_from_json(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, float)):
        return Fraction(v)
    raise FileFormatError(f"not a number or p/q string: {v!r}")


# ---------------------------------------------------------------------------
# sequences


def sequence_to_dict(seq: WeightSequence) -> dict:
    sparse = seq.sparse
    return {
        "label": seq.label,
        "log_terms": [float(v) for v in seq.log_terms],
        "sparse_form": {"family": sparse.family if sparse else "none",
                        "params": sparse.params() if sparse else {}},
        "flags": {"weakly_log_convex": bool(seq.weakly_log_convex)},
    }


def sequence_from_dict(obj: dict, path="<memory>") -> WeightSequence:
    label = str(_require(obj, "label", path))
    terms = _require(obj, "log_terms", path)
    if (not isinstance(terms, list)
            or not all(isinstance(v, (int, float)) for v in terms)):
        raise FileFormatError(f"{path}: log_terms must be a list of numbers")
    sf = obj.get("sparse_form") or {"family": "none", "params": {}}
    sparse = sparse_from_spec(sf.get("family", "none"), sf.get("params", {}))
    flags = obj.get("flags") or {}
    return WeightSequence(label, np.asarray(terms, dtype=float), sparse,
                          bool(flags.get("weakly_log_convex", False)))


def save_sequence(seq: WeightSequence, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(sequence_to_dict(seq), indent=1) + "\n")


def load_sequence(path: Union[str, Path]) -> WeightSequence:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return sequence_from_dict(obj, path)


# ---------------------------------------------------------------------------
# weight functions


def weight_function_to_dict(w: WeightFunction) -> dict:
    fam = None
    if w.family is not None:
        fam = {"kind": "power", "s": float(w.family.s)}
    return {"knots": [[_num_to_json(t), _num_to_json(p)] for t, p in w.knots],
            "tail_slope": _num_to_json(w.tail_slope),
            "family": fam}


def weight_function_from_dict(obj: dict, path="<memory>") -> WeightFunction:
    knots = _require(obj, "knots", path)
    tail = _num_from_json(_require(obj, "tail_slope", path))
    try:
        pairs = [(_num_from_json(t), _num_from_json(p)) for t, p in knots]
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{path}: bad knot list: {exc}") from exc
    fam_obj = obj.get("family")
    if fam_obj is not None and fam_obj.get("kind") != "power":
        raise FileFormatError(f"{path}: unknown family kind "
                              f"{fam_obj.get('kind')!r}")
    return make_weight_function(pairs, tail, family=fam_obj,
                                label=str(obj.get("label", "wf")))


def save_weight_function(w: WeightFunction, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(weight_function_to_dict(w), indent=1) + "\n")


def load_weight_function(path: Union[str, Path]) -> WeightFunction:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return weight_function_from_dict(obj, path)


# ---------------------------------------------------------------------------
# matrices


def matrix_to_dict(mat: WeightMatrix) -> dict:
    return {"lambdas": [float(l) for l in mat.lambdas],
            "rows": [sequence_to_dict(mat.row(l)) for l in mat.lambdas],
            "label": mat.label}


def matrix_from_dict(obj: dict, path="<memory>") -> WeightMatrix:
    lambdas = _require(obj, "lambdas", path)
    rows = _require(obj, "rows", path)
    if len(lambdas) != len(rows):
        raise FileFormatError(f"{path}: lambdas and rows differ in length")
    seqs = tuple(sequence_from_dict(r, path) for r in rows)
    return WeightMatrix(tuple(float(l) for l in lambdas), seqs,
                        label=str(obj.get("label", "matrix")))


def save_matrix(mat: WeightMatrix, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(mat), indent=1) + "\n")


def load_matrix(path: Union[str, Path]) -> WeightMatrix:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return matrix_from_dict(obj, path)


# ---------------------------------------------------------------------------
# jets


def jet_to_dict(jet: Jet) -> dict:
    if jet.mode == "exact":
        coeffs = [[c.numerator, c.denominator] for c in jet.coefficients]
    else:
        coeffs = [float(c) for c in jet.coefficients]
    return {"mode": jet.mode, "coefficients": coeffs}


def jet_from_dict(obj: dict, path="<memory>") -> Jet:
    mode = str(_require(obj, "mode", path))
    coeffs = _require(obj, "coefficients", path)
    if mode == "exact":
        try:
            vals = [Fraction(int(n), int(d)) for n, d in coeffs]
        except (TypeError, ValueError) as exc:
            raise FileFormatError(
                f"{path}: exact coefficients must be [num, den] pairs") from exc
    elif mode == "float":
        vals = [float(c) for c in coeffs]
    else:
        raise FileFormatError(f"{path}: mode must be exact or float")
    return Jet(tuple(vals), mode)


def save_jet(jet: Jet, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(jet_to_dict(jet)) + "\n")


def load_jet(path: Union[str, Path]) -> Jet:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return jet_from_dict(obj, path)


# ---------------------------------------------------------------------------
# reports


def json_report(payload: dict, cfg: RunConfig = DEFAULT_CONFIG) -> str:
    """Deterministic JSON report embedding the run config."""
    doc = {"schema_version": SCHEMA_VERSION, "config": cfg.to_dict(),
           **payload}
    return json.dumps(doc, indent=1, sort_keys=True,
                      default=_json_default) + "\n"


def _json_default(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "value"):  # enums
        return obj.value
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return _num_to_json(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def csv_report(columns: Sequence[str], rows: Sequence[Sequence],
               cfg: RunConfig = DEFAULT_CONFIG) -> str:
    """CSV with a versioned header line and the config as a comment."""
    buf = _io.StringIO()
    buf.write(CSV_HEADER_PREFIX + "\n")
    buf.write("# config " + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "value"):
        return v.value
    return v


def write_report(text: str, out: Optional[Union[str, Path]]) -> None:
    if out is None:
        print(text, end="")
    else:
        Path(out).write_text(text)
