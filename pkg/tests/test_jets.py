import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ultradiff import (Jet, exp_jet, geometric_jet, growth_profile,
                       identity_jet, jet_add, jet_compose,
                       jet_compose_bruteforce, jet_from_function,
                       jet_functional_inverse, jet_mul, jet_ode_solve,
                       jet_reciprocal, jet_scale, make_gevrey, zero_jet)


def rand_jet(rng, K, zero_const=False):
    coeffs = [Fraction(rng.randint(-5, 5), rng.randint(1, 5))
              for _ in range(K + 1)]
    if zero_const:
        coeffs[0] = Fraction(0)
    return Jet(tuple(coeffs))


def test_mul_matches_known_product():
    # (1/(1-t))^2 = sum (k+1) t^k
    g = geometric_jet(10)
    sq = jet_mul(g, g)
    assert [sq[k] for k in range(11)] == [Fraction(k + 1) for k in range(11)]


def test_reciprocal_of_exp():
    e = exp_jet(20)
    r = jet_reciprocal(e)
    assert [r[k] for k in range(21)] \
        == [Fraction((-1) ** k, math.factorial(k)) for k in range(21)]


def test_reciprocal_requires_nonzero_constant():
    with pytest.raises(ZeroDivisionError):
        jet_reciprocal(identity_jet(5))


def test_compose_matches_bruteforce():
    rng = random.Random(3)
    for _ in range(100):
        f = rand_jet(rng, 10)
        g = rand_jet(rng, 10, zero_const=True)
        assert jet_compose(f, g).coefficients \
            == jet_compose_bruteforce(f, g).coefficients


def test_compose_requires_vanishing_inner():
    with pytest.raises(ValueError):
        jet_compose(exp_jet(5), exp_jet(5))


def test_functional_inverse_roundtrip():
    rng = random.Random(5)
    K = 25
    for _ in range(5):
        coeffs = [Fraction(0), Fraction(rng.randint(1, 4), rng.randint(1, 3))]
        coeffs += [Fraction(rng.randint(-3, 3), rng.randint(1, 4))
                   for _ in range(K - 1)]
        f = Jet(tuple(coeffs))
        g = jet_functional_inverse(f)
        assert jet_compose(f, g).coefficients == identity_jet(K).coefficients
        assert jet_compose(g, f).coefficients == identity_jet(K).coefficients


def test_ode_xsq_is_geometric():
    field = [[Fraction(1)], [Fraction(2)], [Fraction(1)]]
    x = jet_ode_solve(field, Fraction(1), 40)
    assert x.coefficients == geometric_jet(40).coefficients


def test_ode_zero_field_constant_solution():
    x = jet_ode_solve([[Fraction(0)]], Fraction(7), 10)
    assert x[0] == 7 and all(x[k] == 0 for k in range(1, 11))


def test_reciprocal_via_ode_reduction():
    rng = random.Random(9)
    for _ in range(20):
        f = rand_jet(rng, 30)
        while f[0] == 0:
            f = rand_jet(rng, 30)
        K = f.order
        x0 = 1 / f[0]
        fp = [f[b + 1] * (b + 1) for b in range(K)]
        field = [[-x0 * x0 * c for c in fp],
                 [-2 * x0 * c for c in fp],
                 [-c for c in fp]]
        via_ode = jet_ode_solve(field, x0, K)
        assert via_ode.coefficients == jet_reciprocal(f).coefficients


def test_growth_profile_examples():
    ones = make_gevrey(0.0, 40)
    z = zero_jet(20)
    assert all(c == 0.0 for _, c in growth_profile(z, ones, [0.5, 1.0, 2.0]))
    g = geometric_jet(20)
    prof = dict(growth_profile(g, ones, [1.0]))
    assert prof[1.0] == pytest.approx(1.0)
    e = exp_jet(20)
    prof = dict(growth_profile(e, ones, [1.0]))
    assert prof[1.0] == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6),
                min_size=3, max_size=8),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6),
                min_size=3, max_size=8))
def test_ring_laws(a_coeffs, b_coeffs):
    K = min(len(a_coeffs), len(b_coeffs)) - 1
    a = Jet(tuple(a_coeffs[:K + 1]))
    b = Jet(tuple(b_coeffs[:K + 1]))
    assert jet_mul(a, b).coefficients[:K + 1] \
        == jet_mul(b, a).coefficients[:K + 1]
    assert jet_add(a, b).coefficients == jet_add(b, a).coefficients
    two_a = jet_scale(a, Fraction(2))
    assert two_a.coefficients == jet_add(a, a).coefficients


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_compose_associativity(data):
    K = 8
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    f = rand_jet(rng, K)
    g = rand_jet(rng, K, zero_const=True)
    h = rand_jet(rng, K, zero_const=True)
    lhs = jet_compose(jet_compose(f, g), h)
    rhs = jet_compose(f, jet_compose(g, h).truncated(K))
    assert lhs.coefficients[:K + 1] == rhs.coefficients[:K + 1]
