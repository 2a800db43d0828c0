import math
import random
from fractions import Fraction

import numpy as np
import pytest

from ultradiff import (DEFAULT_CONFIG, Status, check_fdb_property,
                       from_log_terms, m_circ_bruteforce, m_circ_dp,
                       m_circ_exact, make_appendix_a, make_gevrey,
                       make_sawtooth, n_beta_coefficients, n_beta_total)

CFG = DEFAULT_CONFIG.with_(truncation=512)


def random_log_convex(rng, K):
    incs = sorted(rng.uniform(0.0, 1.2) for _ in range(K))
    w = [0.0]
    for d in incs:
        w.append(w[-1] + d)
    return from_log_terms(
        "rand", [w[k] - math.lgamma(k + 1) for k in range(K + 1)])


def test_dp_equals_bruteforce_float():
    rng = random.Random(7)
    for _ in range(10):
        seq = random_log_convex(rng, 12)
        dp = m_circ_dp(seq, 12, CFG)
        vals = [math.exp(v) for v in seq.log_terms]
        for k in range(1, 13):
            bf, _ = m_circ_bruteforce(vals, k)
            assert dp[k] == pytest.approx(math.log(bf), abs=1e-10)


def test_dp_equals_exact_rational():
    # exact values M_k = 2^(k(k-1)/2) are weakly log-convex
    vals = [Fraction(2) ** (k * (k - 1) // 2) for k in range(11)]
    ex = m_circ_exact(vals, 10)
    seq = from_log_terms("pow2", [math.log(v) for v in vals])
    dp = m_circ_dp(seq, 10, CFG)
    for k in range(1, 11):
        assert dp[k] == pytest.approx(math.log(ex[k]), abs=1e-10)


def test_gevrey1_is_fixed_point():
    g1 = make_gevrey(1.0, 64)
    dp = m_circ_dp(g1, 64, CFG)
    assert np.allclose(dp, g1.log_terms[:65], atol=1e-9)


def test_fdb_statuses_match_almost_increasing():
    from ultradiff import check_almost_increasing
    for seq in (make_gevrey(0.0, 256), make_gevrey(1.0, 256),
                make_gevrey(2.0, 256), make_sawtooth(256),
                make_appendix_a(256)):
        ai = check_almost_increasing(seq, CFG).status
        fdb = check_fdb_property(seq, CFG).status
        assert ai is fdb, seq.label


def test_fdb_sawtooth_refuted():
    assert check_fdb_property(make_sawtooth(512), CFG).status is Status.REFUTED


def test_n_beta_sums_to_factorial():
    for k in range(1, 10):
        assert n_beta_total(k) == math.factorial(k)


def test_n_beta_small_values():
    # k = 2: prod over (t1)(t1 + t2) -> coefficient of t1^2 is 1, t1 t2 is 1
    table = n_beta_coefficients(2)
    assert sum(table.values()) == 2
    assert all(c >= 1 for c in table.values())


def test_n_beta_matches_polynomial_expansion():
    # expand prod_{j=1..k} (t_1 + ... + t_j) directly over monomials
    import itertools
    for k in range(1, 7):
        counts = {}
        for choice in itertools.product(*[range(1, j + 1)
                                          for j in range(1, k + 1)]):
            beta = [0] * k
            for c in choice:
                beta[c - 1] += 1
            key = tuple(beta)
            counts[key] = counts.get(key, 0) + 1
        table = n_beta_coefficients(k)
        assert {tuple(b) for b in table} == set(counts)
        for b, c in table.items():
            assert counts[tuple(b)] == c


def test_dp_cap_enforced():
    g = make_gevrey(1.0, 600)
    with pytest.raises(ValueError):
        m_circ_dp(g, 600, CFG.with_(dp_cap=512))


def test_bruteforce_reports_argmax():
    g2 = make_gevrey(2.0, 10)
    vals = [math.exp(v) for v in g2.log_terms]
    val, (j, alpha) = m_circ_bruteforce(vals, 6)
    assert sum(alpha) == 6 and len(alpha) == j
    direct = vals[j] * math.prod(vals[a] for a in alpha)
    assert direct == pytest.approx(val, rel=1e-12)


def test_kernel_paths_agree():
    from ultradiff._kernels import _mcirc_numpy_vec, mcirc_log
    rng = random.Random(21)
    seq = random_log_convex(rng, 96)
    log_m = np.asarray(seq.log_terms, dtype=float)
    assert np.allclose(mcirc_log(log_m), _mcirc_numpy_vec(log_m),
                       atol=1e-12, rtol=0)


def test_no_numba_env_flag(tmp_path):
    import subprocess
    import sys
    code = (
        "import numpy as np\n"
        "from ultradiff._kernels import mcirc_log, using_numba\n"
        "assert not using_numba()\n"
        "out = mcirc_log(np.linspace(0.0, 3.0, 20))\n"
        "np.save(r'%s', out)\n" % (tmp_path / "out.npy"))
    env = dict(**__import__('os').environ, ULTRADIFF_NO_NUMBA="1")
    subprocess.run([sys.executable, "-c", code], check=True, env=env)
    fallback = np.load(tmp_path / "out.npy")
    assert np.allclose(mcirc_log_reference(), fallback, atol=1e-12)


def mcirc_log_reference():
    from ultradiff._kernels import mcirc_log
    return mcirc_log(np.linspace(0.0, 3.0, 20))
