import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ultradiff import (DEFAULT_CONFIG, Status, WeightSequence,
                       check_almost_increasing, check_growth,
                       check_weakly_log_convex, compare_inclusion,
                       from_log_terms, make_appendix_a, make_gevrey,
                       make_sawtooth)
from ultradiff.sequences import (adjust_prefix_max, sparse_from_spec,
                                 sparse_probe_indices, tower_vertices)

CFG = DEFAULT_CONFIG.with_(truncation=512)


def test_gevrey_basic_terms():
    g = make_gevrey(1.0, 64)
    for k in (0, 1, 5, 20):
        assert g.log_terms[k] == pytest.approx(math.lgamma(k + 1), abs=1e-12)


def test_gevrey_log_convex_and_almost_increasing():
    for s in (0.0, 0.5, 1.0, 2.0):
        g = make_gevrey(s, 256)
        assert check_weakly_log_convex(g, CFG).status is Status.HOLDS_UP_TO
        assert check_almost_increasing(g, CFG).status is Status.HOLDS_UP_TO


def test_gevrey_growth_conditions():
    g1 = make_gevrey(1.0, 256)
    assert check_growth(g1, "derivation_closed", CFG).status is Status.HOLDS_UP_TO
    assert check_growth(g1, "liminf_root_positive", CFG).status is Status.HOLDS_UP_TO
    assert check_growth(g1, "root_to_infinity", CFG).status is Status.HOLDS_UP_TO
    g0 = make_gevrey(0.0, 256)
    assert check_growth(g0, "root_to_infinity", CFG).status is Status.REFUTED


def test_tower_vertices_squaring():
    v = tower_vertices(6)
    assert list(v[:4]) == [0, 2, 4, 16]
    for j in range(2, 6):
        assert v[j + 1] == v[j] ** 2


def test_polygon_family_log_convex():
    a = make_appendix_a(4096)
    assert check_weakly_log_convex(a, CFG).status is Status.HOLDS_UP_TO


def test_polygon_family_not_almost_increasing_sparse():
    a = make_appendix_a(512)
    v = check_almost_increasing(a, CFG, sparse_witness=True)
    assert v.status is Status.REFUTED
    j, k, defect = v.witness
    assert (j, k) == (256, 65536)
    assert math.log(defect) >= math.log(16) - 1  # drop across the vertex


def test_sparse_probe_indices_are_vertices():
    idx = sparse_probe_indices()
    assert all(b == a * a for a, b in zip(idx, idx[1:]))


def test_sawtooth_refuted_trend():
    s = make_sawtooth(512)
    assert check_almost_increasing(s, CFG).status is Status.REFUTED
    assert check_weakly_log_convex(s, CFG).status is Status.REFUTED


def test_sawtooth_root_drops_at_breakpoints():
    s = make_sawtooth(512)
    roots = s.log_roots()
    drops = 0
    for k in range(2, 512):
        if roots[k - 1] - roots[k] >= math.log(4) - 1e-9:
            drops += 1
    assert drops >= 3


def test_inclusion_examples():
    g1 = make_gevrey(1.0, 256)
    g2 = make_gevrey(2.0, 256)
    assert compare_inclusion(g1, g2, "<=", CFG).status is Status.HOLDS_UP_TO
    assert compare_inclusion(g1, g2, "<<", CFG).status is Status.HOLDS_UP_TO
    assert compare_inclusion(g2, g1, "<=", CFG).status is Status.REFUTED
    v = compare_inclusion(g2, g1, "<<", CFG)
    assert v.status is Status.REFUTED
    assert v.witness is not None


def test_refuted_always_has_witness():
    s = make_sawtooth(512)
    for check in (check_almost_increasing, check_weakly_log_convex):
        v = check(s, CFG)
        if v.status is Status.REFUTED:
            assert v.witness is not None


def test_log_convex_witness_is_first_violation():
    lt = np.array([0.0, 0.0, 0.0, 5.0, 5.0])  # w jumps then flattens
    seq = from_log_terms("bad", lt)
    v = check_weakly_log_convex(seq, CFG)
    assert v.status is Status.REFUTED
    assert v.witness[0] == 3


def test_m0_must_be_one():
    with pytest.raises(ValueError):
        from_log_terms("bad", np.array([1.0, 0.0]))


def test_adjust_prefix_max_keeps_base_beyond_threshold():
    a = make_appendix_a(256)
    low = make_gevrey(0.25, 256)
    adj, thr = adjust_prefix_max(a, low)
    assert np.all(adj.log_terms >= a.log_terms - 1e-12)
    assert np.all(adj.log_terms >= low.log_terms - 1e-12)
    assert np.allclose(adj.log_terms[thr:], a.log_terms[thr:])
    assert adj.sparse is a.sparse  # closed form survives for far probes


def test_sparse_from_spec_roundtrip():
    for fam, params in (("gevrey", {"s": 2.0}), ("appendix_a", {}),
                        ("sawtooth", {"base": 8, "ratio": 4})):
        sp = sparse_from_spec(fam, params)
        assert sp.family == fam
        assert sparse_from_spec(fam, sp.params()).params() == sp.params()
    assert sparse_from_spec("none", {}) is None
    with pytest.raises(ValueError):
        sparse_from_spec("nope", {})


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(min_value=0.01, max_value=1.5), min_size=3,
                max_size=24))
def test_log_convex_construction_always_passes(increments):
    # cumulative sums of nondecreasing increments give a convex w
    incs = sorted(increments)
    w = np.concatenate([[0.0], np.cumsum(incs)])
    lt = w - np.array([math.lgamma(k + 1) for k in range(len(w))])
    seq = WeightSequence("hyp", lt)
    assert check_weakly_log_convex(seq, CFG).status is not Status.REFUTED
