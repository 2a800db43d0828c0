import math

import numpy as np
import pytest

from ultradiff import (CONDITIONS, DEFAULT_CONFIG, Status, WeightMatrix,
                       build_remark2, check_matrix_condition, from_log_terms,
                       make_gevrey, make_sawtooth, omega_matrix, power_weight,
                       verify_lemma1)

CFG = DEFAULT_CONFIG.with_(truncation=512)


def gevrey_matrix(K=256):
    return WeightMatrix((1.0, 2.0, 3.0),
                        (make_gevrey(1.0, K), make_gevrey(2.0, K),
                         make_gevrey(3.0, K)), label="gevrey-matrix")


def test_single_row_gevrey_all_conditions_hold():
    mat = WeightMatrix((1.0,), (make_gevrey(1.0, 256),))
    for name in CONDITIONS:
        mv = check_matrix_condition(mat, name, CFG)
        assert mv.status is Status.HOLDS_UP_TO, name


def test_rows_must_be_pointwise_ordered():
    with pytest.raises(ValueError):
        WeightMatrix((1.0, 2.0), (make_gevrey(2.0, 64), make_gevrey(1.0, 64)))


def test_remark2_kind1_separates_quantifiers():
    mat = build_remark2("beurling_not_roumieu", 512, CFG)
    b = check_matrix_condition(mat, "rai_B", CFG, sparse_probes=True)
    r = check_matrix_condition(mat, "rai_R", CFG, sparse_probes=True)
    assert b.status is Status.HOLDS_UP_TO
    assert r.status is Status.REFUTED
    assert r.verdict.witness is not None
    # the witness map records which mu answered each lambda
    assert any(mu is not None for mu in b.witness_rows.values())


def test_remark2_kind2_separates_quantifiers():
    mat = build_remark2("roumieu_not_beurling", 512, CFG)
    r = check_matrix_condition(mat, "rai_R", CFG, sparse_probes=True)
    b = check_matrix_condition(mat, "rai_B", CFG, sparse_probes=True)
    assert r.status is Status.HOLDS_UP_TO
    assert b.status is Status.REFUTED


def test_remark2_records_adjustment():
    mat = build_remark2("beurling_not_roumieu", 512, CFG)
    assert mat.adjusted_range is not None
    lo, hi = mat.adjusted_range
    assert 0 <= lo <= hi <= 512
    # rows end up pointwise ordered after the recorded adjustment
    low, up = (mat.row(l) for l in mat.lambdas)
    assert np.all(low.log_terms <= up.log_terms + 1e-9)


def test_derivation_closed_directions():
    mat = gevrey_matrix()
    assert check_matrix_condition(mat, "dc_R", CFG).status is Status.HOLDS_UP_TO
    assert check_matrix_condition(mat, "dc_B", CFG).status is Status.HOLDS_UP_TO


def test_h_and_cw_conditions():
    mat = gevrey_matrix()
    assert check_matrix_condition(mat, "H", CFG).status is Status.HOLDS_UP_TO
    assert check_matrix_condition(mat, "Cw_B", CFG).status is Status.HOLDS_UP_TO
    assert check_matrix_condition(mat, "Cw_R", CFG).status is Status.HOLDS_UP_TO
    flat = WeightMatrix((1.0,), (from_log_terms("ones", np.zeros(257),
                                                weakly_log_convex=True),))
    assert check_matrix_condition(flat, "Cw_B", CFG).status is Status.REFUTED
    assert check_matrix_condition(flat, "H", CFG).status is Status.HOLDS_UP_TO


def test_fdb_matrix_conditions():
    mat = gevrey_matrix()
    assert check_matrix_condition(mat, "FdB_R", CFG).status is Status.HOLDS_UP_TO
    assert check_matrix_condition(mat, "FdB_B", CFG).status is Status.HOLDS_UP_TO


def test_literal_beurling_reading_flag():
    mat = build_remark2("beurling_not_roumieu", 512, CFG)
    literal = check_matrix_condition(
        mat, "rai_B", CFG.with_(literal_rai_beurling=True),
        sparse_probes=True)
    # the literal reading asks each row about itself; the polygon row fails
    assert literal.status is Status.REFUTED


def test_lemma1_consistent_on_fixtures():
    for mat in (gevrey_matrix(),
                WeightMatrix((1.0,), (make_sawtooth(256),))):
        for variant in ("roumieu", "beurling"):
            rep = verify_lemma1(mat, variant, CFG)
            assert "violated" not in (rep.fdb_from_rai_dc,
                                      rep.rai_from_fdb_h), (mat.label, variant)


def test_omega_matrix_satisfies_dc():
    mat = omega_matrix(power_weight(2.0), [0.5, 1.0, 2.0], 200)
    assert check_matrix_condition(mat, "dc_R", CFG).status is Status.HOLDS_UP_TO
    assert check_matrix_condition(mat, "dc_B", CFG).status is Status.HOLDS_UP_TO
