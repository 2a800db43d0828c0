import math
from fractions import Fraction

import numpy as np
import pytest

from ultradiff import (BoundCertificate, DEFAULT_CONFIG, MajorantSpec,
                       Status, WeightMatrix, crosscheck_bound,
                       from_log_terms, geometric_jet, inverse_fn_bound,
                       jet_functional_inverse, lemma4_construct,
                       majorant_derivatives, majorant_jet_exact,
                       make_gevrey, neumann_inverse_bound,
                       ode_bound_beurling, ode_bound_roumieu, rai_witness,
                       rescale_for_neumann, zero_jet)
from ultradiff.bounds import n_beta_exact_bound
from ultradiff.jets import Jet

CFG = DEFAULT_CONFIG.with_(truncation=256)


def ones(K=64):
    return from_log_terms("ones", np.zeros(K + 1), weakly_log_convex=True)


def test_certificate_shapes():
    c = BoundCertificate(2.0, 3.0, ones(), shift="none")
    assert c.log_bound(0) == pytest.approx(math.log(2.0))
    assert c.log_bound(4) == pytest.approx(
        math.log(2.0) + 4 * math.log(3.0) + math.lgamma(5))
    s = BoundCertificate(2.0, 3.0, ones(), shift="minus_one")
    assert s.log_bound(0) == pytest.approx(math.log(2.0))
    assert s.log_bound(4) == pytest.approx(
        math.log(2.0) + 4 * math.log(3.0) + math.lgamma(4))


def test_majorant_closed_form_vs_series():
    spec = MajorantSpec(A=3.0, eta=2.0, p=0.5, k=30)
    logY, logG = majorant_derivatives(spec, 30)
    exact = majorant_jet_exact(Fraction(3), Fraction(2), Fraction(1, 2), 30)
    for j in range(31):
        assert logY[j] == pytest.approx(math.log(exact[j]), abs=1e-9)
    # Y'(0) = A, Y''(0) = A^2 eta p; G dominates Y term by term
    assert logY[1] == pytest.approx(math.log(3.0))
    assert logY[2] == pytest.approx(math.log(9.0 * 2.0 * 0.5))
    # G is the field envelope: A eta^j j! p^j
    assert logG[3] == pytest.approx(math.log(3.0 * 8.0 * 6.0 * 0.125))


def test_majorant_scaling_in_A():
    a = majorant_derivatives(MajorantSpec(A=3.0, eta=2.0, p=0.5, k=20), 20)[0]
    b = majorant_derivatives(MajorantSpec(A=6.0, eta=2.0, p=0.5, k=20), 20)[0]
    for j in range(1, 21):
        assert b[j] - a[j] == pytest.approx(j * math.log(2), abs=1e-9)


def test_rai_witness_gevrey_matrix():
    mat = WeightMatrix((1.0, 2.0), (make_gevrey(1.0, 64), make_gevrey(2.0, 64)))
    mu, H = rai_witness(mat, 1.0, CFG)
    assert mu == 1.0 and H == pytest.approx(1.0)


def test_ode_bound_dominates_geometric():
    cert = BoundCertificate(2.0, 1.0, ones(), "minus_one", "ode_field")
    res = ode_bound_roumieu(cert, A=2.0, cfg=CFG)
    assert res.certificate.C == pytest.approx(2 * res.A_effective)
    rep = crosscheck_bound(res.certificate, geometric_jet(40))
    assert rep["dominates"]


def test_neumann_closed_form():
    cert = BoundCertificate(0.25, 1.0, ones(), "none")
    res = neumann_inverse_bound(cert, A=2.0, cfg=CFG)
    for k in range(1, 31):
        closed = 2.0 * 0.5 * 1.5 ** (k - 1)
        assert res.log_exact[k] == pytest.approx(math.log(closed), abs=1e-9)
    # simplified certificate dominates the exact sum out to k = 60
    for k in range(min(61, len(res.log_exact))):
        assert res.certificate.log_bound(k) - math.lgamma(k + 1) \
            >= res.log_exact[k] - 1e-9


def test_neumann_rejects_divergent_sum():
    cert = BoundCertificate(1.0, 1.0, ones(), "none")
    with pytest.raises(ValueError, match="rescale"):
        neumann_inverse_bound(cert, A=2.0, cfg=CFG)
    fixed = rescale_for_neumann(cert, 2.0)
    assert 2.0 * fixed.C < 1.0
    neumann_inverse_bound(fixed, A=2.0, cfg=CFG)


def test_inverse_bound_dominates_exact_inverse():
    K = 25
    f = Jet((Fraction(0), Fraction(1), Fraction(1, 2))
            + (Fraction(0),) * (K - 2))
    g = jet_functional_inverse(f)
    cert = BoundCertificate(1.0, 1.0, ones(), "minus_one")
    res = inverse_fn_bound(cert, A=2.0, cfg=CFG)
    rep = crosscheck_bound(res.certificate, g)
    assert rep["dominates"]


def test_relaxed_r_bound_dominates_exact_coefficients():
    cert = BoundCertificate(1.0, 1.0, ones(), "minus_one")
    res = inverse_fn_bound(cert, A=2.0, cfg=CFG)
    sc = res.neumann.certificate
    log_s = [math.log(sc.C) + b * math.log(sc.rho) for b in range(10)]
    for k in range(1, 7):
        assert res.log_R[k] >= n_beta_exact_bound(log_s, k) - 1e-9


def test_lemma4_closed_form():
    K = 128
    g1, g3 = make_gevrey(1.0, K), make_gevrey(3.0, K)
    res = lemma4_construct([0.0] * (K + 1), g1, g1, g3, 1.0, CFG)
    for k in (2, 5, 20, 100):
        assert res.N1.log_terms[k] == pytest.approx(0.5 * math.lgamma(k + 1),
                                                    abs=1e-9)
    assert res.sandwich_ok
    assert res.gap_constant == pytest.approx(1.0)
    assert res.strict_inclusion.status is Status.HOLDS_UP_TO


def test_lemma4_zero_envelope_entries():
    K = 128
    g1, g2, g3 = (make_gevrey(s, K) for s in (1.0, 2.0, 3.0))
    res = lemma4_construct([-math.inf] * (K + 1), g1, g2, g3, 4.0, CFG)
    assert res.sandwich_ok
    assert res.gap_constant <= 2.0 + 1e-9  # sqrt(H1)


def test_beurling_pipeline_any_target_rate():
    K = 128
    rows = tuple(make_gevrey(s, K) for s in (1.0, 2.0, 3.0))
    mat = WeightMatrix((1.0, 2.0, 3.0), rows, label="gevrey-matrix")
    fam = lambda rho: max(1.0, 2.0 / rho)
    for target in (4.0, 1.0, 0.25):
        res = ode_bound_beurling(fam, mat, 3.0, target, A=2.0, cfg=CFG)
        c = res.certificate
        assert c.rho == pytest.approx(target)
        # the output dominates the pre-conversion bound on the sandwich row
        l4, sr = res.stages["lemma4"], res.stages["roumieu_sigma"]
        D = c.C * target / (2 * res.stages["conversion_E"] * sr)
        for k in range(1, 100):
            assert c.log_bound(k) + 1e-9 >= (math.log(D) + k * math.log(sr)
                                             + math.lgamma(k)
                                             + l4.N2.log_terms[k - 1])


def test_crosscheck_trivial_and_violation():
    cert = BoundCertificate(1.0, 1.0, ones(40), "none")
    assert crosscheck_bound(cert, zero_jet(20))["dominates"]
    bad = BoundCertificate(0.5, 1.0, ones(40), "none")
    rep = crosscheck_bound(bad, geometric_jet(20))
    assert not rep["dominates"] and rep["first_violation"] == 1
