from fractions import Fraction

import mpmath as mpm
import pytest

from mmvkit.indexcore import parse_index, index_to_word
from mmvkit.numeval import (
    conv_terms,
    default_digits,
    eval_A,
    eval_convT,
    eval_index,
    eval_lincomb,
    eval_psi_series,
    eval_value,
    eval_word,
    eval_word_naive,
    harmonic,
    partial_S,
    partial_T,
    partial_zeta,
    workdps,
)
from mmvkit.wordalg import LinComb, Word


def tol(e):
    return mpm.mpf(10) ** e


def test_default_digits():
    assert default_digits() == 50


def test_known_values():
    with workdps(50):
        assert abs(eval_index(parse_index([-2]), 40) - mpm.pi**2 / 4) < tol(-38)
        assert abs(eval_value("zeta", (2,), None, 40) - mpm.pi**2 / 6) < tol(-38)
        assert abs(eval_value("t", (2,), None, 40) - mpm.pi**2 / 8) < tol(-38)
        # M(2) = 2 sum 1/(2n)^2 = zeta(2)/2
        assert abs(eval_index(parse_index([2]), 40) - mpm.pi**2 / 12) < tol(-38)


def test_eval_word_matches_naive_partial_sums():
    for src in ([-2], [1, -2], [-1, 2]):
        idx = parse_index(src)
        w = index_to_word(idx)
        with workdps(30):
            fast = eval_word(w, 25)
            slow, bound = eval_word_naive(w, 4000, 25)
            assert abs(fast - slow) <= bound
            assert abs(fast - slow) < tol(-2)


def test_eval_lincomb_is_linear():
    w1 = index_to_word(parse_index([-2]))
    w2 = index_to_word(parse_index([2]))
    lc = LinComb({w1: Fraction(2), w2: Fraction(-1, 3)})
    with workdps(50):
        got = eval_lincomb(lc, 40)
        want = 2 * eval_word(w1, 40) - eval_word(w2, 40) / 3
        assert abs(got - want) < tol(-38)


def test_partial_sums_are_exact_rationals():
    # T_n(k) over odd slots below 2n, S_n over even, by direct recount
    def brute_T(k, n):
        # innermost-first composition over parity-interleaved chain
        # depth-1 check only
        (k1,) = k
        return sum(Fraction(2, m**k1) for m in range(1, 2 * n) if m % 2 == 1)

    for n in range(1, 6):
        assert partial_T((2,), n) == brute_T((2,), n)
    assert partial_T((1,), 1) == 2
    assert partial_S((1,), 2) == Fraction(1)  # 2 * (1/2)
    assert partial_zeta((1,), 4) == sum(Fraction(1, m) for m in range(1, 5))
    assert harmonic(4, 2) == Fraction(1) + Fraction(1, 4) + Fraction(1, 9) + Fraction(1, 16)


def test_conv_reduces_to_plain_t():
    with workdps(50):
        got = eval_convT((2,), (1,), 40)
        want = eval_value("T", (3,), None, 40)
        assert abs(got - want) < tol(-38)


def test_conv_terms_is_finite_mmv_sum():
    terms = conv_terms((2,), (1, 1))
    assert len(terms)  # a nonempty exact expansion
    with workdps(50):
        total = mpm.mpf(0)
        for idx, c in terms:
            total += mpm.mpf(c.numerator) / c.denominator * eval_index(idx, 40)
        assert abs(total - eval_convT((2,), (1, 1), 40)) < tol(-36)


def test_psi_series_depth_one():
    with workdps(50):
        got = eval_psi_series((1,), 2, 40)
        want = 2 * eval_value("T", (3,), None, 40)
        assert abs(got - want) < tol(-36)


def test_eval_A_at_interior_point():
    # A(k; x) at x = 1/2 agrees with its defining series
    with workdps(40):
        x = mpm.mpf(1) / 2
        got = eval_A((2,), x, 30)
        want = mpm.mpf(0)
        for n in range(1, 400):
            if n % 2 == 1:
                want += 2 * x**n / n**2
        assert abs(got - want) < tol(-20)


def test_domain_errors():
    with pytest.raises(ValueError):
        eval_index(parse_index([1, 1]))  # divergent
    with pytest.raises(ValueError):
        eval_value("zeta", (2, 1), None, 30)  # divergent tail
    with pytest.raises(ValueError):
        eval_value("bogus", (2,), None, 30)
