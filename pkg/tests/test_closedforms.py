import os
from fractions import Fraction

import mpmath as mpm
import pytest

from mmvkit.closedforms import (
    ClosedForm,
    bernoulli_frac,
    convT_from_psi,
    hh_sum,
    h_sum2,
    invert_triangular,
    msv_double_closed,
    run_fixtures,
    th_sum,
    verify_identity,
    zed,
    zed_tilde,
    zeta_even_pi,
    zetabar_cf,
)
from mmvkit.numeval import eval_convT, workdps
from mmvkit.regutils import ConstMonomial

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir,
                        "fixtures", "identities.jsonl")


def test_bernoulli_and_even_zeta():
    assert [bernoulli_frac(n) for n in range(5)] == [
        Fraction(1), Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]
    assert zeta_even_pi(2) == (Fraction(1, 6), 2)
    assert zeta_even_pi(4) == (Fraction(1, 90), 4)
    with pytest.raises(ValueError):
        zeta_even_pi(3)


def test_zetabar_conventions():
    assert zetabar_cf(0) == ClosedForm.const(Fraction(1, 2))
    assert zetabar_cf(1) == ClosedForm.const(1, ConstMonomial.log2())
    with workdps(40):
        got = zetabar_cf(2).numeric(30)
        want = mpm.pi**2 / 12
        assert abs(got - want) < mpm.mpf(10) ** -25


def test_closed_form_algebra():
    a = ClosedForm.const(2, ConstMonomial.log2())
    b = ClosedForm.sym(("T", (2,)), 3)
    prod = a.mul_scalar(b)
    with workdps(40):
        assert abs(prod.numeric(30) - a.numeric(30) * b.numeric(30)) \
            < mpm.mpf(10) ** -20
    assert (a + b - a).terms == b.terms
    assert a.scale(0) == ClosedForm.zero()
    with pytest.raises(ValueError):
        b.mul_scalar(b)


def test_invert_triangular_round_trip():
    import random

    rng = random.Random(7)
    table = {}

    def A(j, p):
        if j == p:
            return Fraction(1)
        return table.setdefault((j, p), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))

    B = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(6)]
    C = []
    for p in range(1, 7):
        C.append(sum(A(j, p) * B[j - 1] for j in range(1, p + 1)))
    assert invert_triangular(A, C) == B
    with pytest.raises(ValueError):
        invert_triangular(lambda j, p: Fraction(2), [Fraction(1)])


def test_zed_tilde_inverts_odd_chains():
    # sum_{i<=j<=p} ztilde(i,j) * 2 zetabar(2j-2i+1 -> odd chain A) is the
    # triangular inverse property; spot-check numerically at p = 3 with the
    # matrix A(j,p) = 2 zetabar(2p-2j+1)
    with workdps(60):
        p = 3
        A = [[mpm.mpf(0)] * (p + 1) for _ in range(p + 1)]
        Zt = [[mpm.mpf(0)] * (p + 1) for _ in range(p + 1)]
        for j in range(1, p + 1):
            for q in range(j, p + 1):
                A[j][q] = (2 * zetabar_cf(2 * q - 2 * j + 1).numeric(50)
                           if q > j else mpm.mpf(2) * mpm.log(2))
                Zt[j][q] = zed_tilde(j, q).numeric(50)
        for i in range(1, p + 1):
            for q in range(i, p + 1):
                total = sum(A[i][j] * Zt[j][q] for j in range(i, q + 1))
                want = 1 if i == q else 0
                assert abs(total - want) < mpm.mpf(10) ** -40, (i, q)


def test_hh_sum_matches_brute_series():
    with workdps(40):
        a, q, b = 1, 3, 2
        got = hh_sum(a, q, b).numeric(30)
        total = mpm.mpf(0)
        H1 = mpm.mpf(0)
        H2 = mpm.mpf(0)
        for n in range(1, 4000):
            total += H1 * H2 / (n - mpm.mpf(1) / 2) ** q
            H1 += mpm.mpf(1) / n
            H2 += mpm.mpf(1) / n**2
        assert abs(got - total) < mpm.mpf(10) ** -5
        assert h_sum2(3).terms == hh_sum(1, 3, 1).terms


def test_th_sum_domain():
    with pytest.raises(ValueError):
        th_sum(2, 2)
    with pytest.raises(ValueError):
        th_sum(1, 0)


def test_msv_double_closed_domain():
    with pytest.raises(ValueError):
        msv_double_closed(2, 2)  # even weight
    with pytest.raises(ValueError):
        msv_double_closed(1, 1)  # q too small


def test_convT_from_psi_numeric():
    tol = mpm.mpf(10) ** -25
    for k, q in [((2,), 3), ((1, 2), 2), ((2,), 2), ((1, 2), 3)]:
        with workdps(50):
            got = convT_from_psi(k, q).numeric(40)
            want = eval_convT(k, (1,) * q, 40)
            assert abs(got - want) <= tol, (k, q)


def test_verify_identity_inputs():
    ok, resid = verify_identity("1/2 + 1/2", 1, 30)
    assert ok and resid < mpm.mpf(10) ** -20
    ok, _ = verify_identity("pi*pi", "6*zeta(2)", 30)
    assert ok
    ok, _ = verify_identity("pi", "3", 30)
    assert not ok


def test_fixture_file_runs_clean():
    results = list(run_fixtures(FIXTURES, 40))
    assert results
    assert all(rec["ok"] for rec in results)
    assert all(set(rec) == {"name", "ok", "residual", "digits"}
               for rec in results)
