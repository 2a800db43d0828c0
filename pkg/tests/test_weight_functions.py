import math
import random
from fractions import Fraction

import numpy as np
import pytest

from ultradiff import (DEFAULT_CONFIG, Status, check_omega_conditions,
                       check_subadditive, check_thm3_condition,
                       conjugate_back, make_weight_function, omega_matrix,
                       power_weight, young_conjugate)
from ultradiff.weight_functions import omega_log_row

CFG = DEFAULT_CONFIG


def random_convex_pl(rng, n_knots=6):
    ts = sorted(rng.sample(range(0, 40), n_knots))
    ts[0] = 0
    slopes = sorted(rng.randint(0, 12) for _ in range(n_knots))
    knots = [(Fraction(ts[0]), Fraction(0))]
    for i in range(1, n_knots):
        t_prev, p_prev = knots[-1]
        knots.append((Fraction(ts[i]),
                      p_prev + slopes[i - 1] * (ts[i] - ts[i - 1])))
    tail = Fraction(slopes[-1] + rng.randint(1, 5))
    return make_weight_function(knots, tail)


def test_double_conjugate_is_identity():
    rng = random.Random(11)
    for _ in range(50):
        w = random_convex_pl(rng)
        c = young_conjugate(w)
        back = conjugate_back(c, w.tail_slope)
        for t, p in w.knots:
            assert back.phi(t) == w.phi(t), (t, p)


def test_power_conjugate_matches_analytic():
    s = 2.0
    w = power_weight(s, knot_count=10 ** 4, t_max=24.0)
    c = young_conjugate(w)
    fam = w.family
    for u in (0.6, 1.0, 2.5, 7.0, 11.0):
        exact = fam.conjugate(u)
        assert float(c.value(Fraction(u).limit_denominator(10 ** 9))) \
            == pytest.approx(exact, abs=1e-6)


def test_power_conjugate_closed_form():
    fam = power_weight(2.0, 16, 8.0).family
    # s u (log(s u) - 1) above the kink, -1 below
    assert fam.conjugate(0.25) == -1.0
    u = 3.0
    assert fam.conjugate(u) == pytest.approx(2 * u * (math.log(2 * u) - 1))


def test_conjugate_horizon_enforced():
    w = make_weight_function([(0, 0), (2, 4)], 3)
    c = young_conjugate(w)
    with pytest.raises(ValueError):
        c.value(Fraction(10))  # beyond the tail slope


def test_omega_conditions_power_family():
    w1 = power_weight(1.0)
    res1 = check_omega_conditions(w1, CFG)
    assert res1["omega1"].status is Status.HOLDS_UP_TO
    assert res1["omega2"].status is Status.HOLDS_UP_TO
    assert res1["omega3"].status is Status.HOLDS_UP_TO
    assert res1["big_O_t"].status is Status.HOLDS_UP_TO
    assert res1["little_o_t"].status is Status.REFUTED
    w2 = power_weight(2.0)
    res2 = check_omega_conditions(w2, CFG)
    assert res2["little_o_t"].status is Status.HOLDS_UP_TO
    whalf = power_weight(0.5)
    res3 = check_omega_conditions(whalf, CFG)
    assert res3["big_O_t"].status is Status.REFUTED


def test_thm3_condition_examples():
    conc = power_weight(2.0)  # omega(t) = sqrt(t) is concave -> holds
    assert check_thm3_condition(conc, CFG).status is Status.HOLDS_UP_TO
    sq = power_weight(0.5)  # omega(t) = t^2 -> fails
    assert check_thm3_condition(sq, CFG).status is Status.REFUTED


def test_subadditive_examples():
    conc = power_weight(2.0)  # omega(t) = sqrt(t) is subadditive
    assert check_subadditive(conc, CFG).status is Status.HOLDS_UP_TO
    sq = power_weight(0.5)  # omega(t) = t^2 is not
    v = check_subadditive(sq, CFG)
    assert v.status is Status.REFUTED
    a, b, ratio = v.witness
    assert ratio > 1


def test_omega_row_normalization():
    w = power_weight(2.0)
    row, k_eff = omega_log_row(w, 1.0, 64)
    assert row[0] == 0.0
    assert k_eff >= 32


def test_omega_matrix_monotone_and_convex():
    w = power_weight(2.0)
    mat = omega_matrix(w, [0.5, 1.0, 2.0], 200)
    rows = [mat.row(l).log_terms for l in mat.lambdas]
    for a, b in zip(rows, rows[1:]):
        assert np.all(a <= b + 1e-12)
    for r in rows:
        wseq = r + np.array([math.lgamma(k + 1) for k in range(len(r))])
        assert np.all(np.diff(wseq, 2) >= -1e-9)


def test_omega_matrix_limit_constant():
    # for the power weight s = 2 the normalized root approaches (2 rho)^2
    w = power_weight(2.0, knot_count=512, t_max=64.0)
    for rho in (0.5, 1.0, 2.0):
        mat = omega_matrix(w, [rho], 220)
        row = mat.row(rho).log_terms
        limit = (2 * rho) ** 2
        for k in range(20, min(200, len(row) - 1)):
            stat = math.exp((row[k] - math.lgamma(k + 1)) / k)
            assert limit / 2 <= stat <= limit * 2, (rho, k, stat)
