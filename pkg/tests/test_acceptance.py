"""End-to-end acceptance checks, one test per contract item.

Each test pins its own tolerance and wall-clock budget.  The shared
RelationKit is module-scoped so the weight-6 harvest runs once.
"""

import json
import random
import time
from fractions import Fraction
from itertools import permutations

import mpmath as mpm
import pytest

from mmvkit.indexcore import parse_index, index_to_word, word_to_index
from mmvkit.wordalg import LinComb, Word, dual_word, shuffle, stuffle_indices
from mmvkit.poset2 import expand, linear_extension_count, psi_poset
from mmvkit.numeval import (
    default_digits,
    eval_index,
    eval_lincomb,
    eval_psi_series,
    eval_value,
    eval_word,
    workdps,
)
from mmvkit.linrel import TABLE1, RelationKit, fibonacci_bound, generators
from mmvkit.closedforms import (
    ClosedForm,
    fixture_identities,
    msv_double_closed,
    psi_via_convT,
    psi_via_mtv,
    thm_I_closed,
    thm_I_quadrature,
    verify_identity,
    zed,
    zed_closed,
)
from mmvkit import shell

I = parse_index


@pytest.fixture(scope="module")
def kit():
    return RelationKit()


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds
        self.start = time.monotonic()

    def check(self):
        assert time.monotonic() - self.start < self.seconds


def test_stuffle_expansions_are_verbatim():
    budget = Budget(1)
    got = stuffle_indices(I([2, 1, -3]), I([-2]))
    want = {
        I([-2, 2, 1, -3]): 1,
        I([2, -2, 1, -3]): 1,
        I([2, 1, -2, -3]): 1,
        I([2, 1, -3, -2]): 1,
        I([2, 1, -5]): 2,
    }
    assert got.terms == {k: Fraction(v) for k, v in want.items()}
    got = stuffle_indices(I([1, -3]), I([2, -3]))
    want = {
        I([1, 2, -3, -3]): 2,
        I([2, 1, -3, -3]): 2,
        I([2, -3, 1, -3]): 1,
        I([1, -3, 2, -3]): 1,
        I([3, -3, -3]): 4,
        I([1, 2, -6]): 2,
        I([2, 1, -6]): 2,
        I([3, -6]): 4,
    }
    assert got.terms == {k: Fraction(v) for k, v in want.items()}
    budget.check()


def test_regularized_weight_three_relation(kit):
    budget = Budget(10)
    # symbolic: log2*M(-2) is derivable and, modulo the harvested weight-3
    # rows, equals M(-1,2) - 1/2 M(1,-2)
    table = kit.log2_table(3)
    expr = table[I([-2])]
    diff = {I([-1, 2]): Fraction(1), I([1, -2]): Fraction(-1, 2)}
    for idx, c in expr.items():
        diff[idx] = diff.get(idx, Fraction(0)) - c
    diff = {i: c for i, c in diff.items() if c}
    # membership in the harvested row space: adding diff must not raise rank
    basis = kit._relation_basis(3)
    cols = {g: n for n, g in enumerate(generators(3))}
    rows = [{cols[i]: c for i, c in r.items()} for r in basis]
    from mmvkit.linrel import rational_rank

    base_rank = rational_rank(rows)
    assert rational_rank(rows + [{cols[i]: c for i, c in diff.items()}]) == base_rank
    # numeric: both stated forms of the relation hold at 40 digits
    with workdps(50):
        lhs = 2 * eval_index(I([-1, 2]), 40)
        rhs1 = 2 * mpm.log(2) * eval_index(I([-2]), 40) + eval_index(I([1, -2]), 40)
        rhs2 = mpm.mpf(7) / 2 * mpm.zeta(3)
        assert abs(lhs - rhs1) <= mpm.mpf(10) ** -30
        assert abs(lhs - rhs2) <= mpm.mpf(10) ** -30
    budget.check()


def test_duality_preserves_values_through_weight_six():
    budget = Budget(300)
    tol = mpm.mpf(10) ** -30
    for w in range(2, 7):
        for g in generators(w):
            if g.eps[0] != -1:
                continue
            word = index_to_word(g)
            image = dual_word(word)
            assert dual_word(image) == LinComb.of(word)
            with workdps(50):
                assert abs(eval_word(word, 40) - eval_lincomb(image, 40)) <= tol
    with workdps(50):
        lhs = eval_index(I([-1, 1, 2]), 40)
        rhs = (
            eval_index(I([-4]), 40)
            + eval_index(I([-1, -3]), 40)
            - eval_index(I([-1, 3]), 40)
        )
        assert abs(lhs - rhs) <= tol
    budget.check()


def test_both_products_are_homomorphisms():
    budget = Budget(600)
    rng = random.Random(20260823)
    pool = {w: generators(w) for w in range(2, 6)}
    tol = mpm.mpf(10) ** -30
    for _ in range(50):
        w1 = rng.choice([2, 3, 4, 5])
        w2 = rng.choice([w for w in (2, 3, 4, 5) if w1 + w <= 7])
        a = rng.choice(pool[w1])
        b = rng.choice(pool[w2])
        with workdps(50):
            prod = eval_index(a, 40) * eval_index(b, 40)
            sha = eval_lincomb(shuffle(index_to_word(a), index_to_word(b)), 40)
            st = mpm.mpf(0)
            for idx, c in stuffle_indices(a, b):
                st += mpm.mpf(c.numerator) / c.denominator * eval_index(idx, 40)
            assert abs(prod - sha) <= tol, (a, b)
            assert abs(prod - st) <= tol, (a, b)
    budget.check()


def test_double_s_closed_forms():
    budget = Budget(300)
    tol = mpm.mpf(10) ** -25
    for w in (5, 7, 9, 11):
        for q in range(2, w):
            p = w - q
            with workdps(50):
                closed = msv_double_closed(p, q).numeric(40)
                direct = eval_value("S", (p, q), None, 40)
                assert abs(closed - direct) <= tol, (p, q)
    with workdps(50):
        z = mpm.zeta
        s32 = mpm.mpf(31) / 4 * z(5) - 4 * z(2) * z(3)
        assert abs(eval_value("S", (3, 2), None, 40) - s32) <= tol
        s1112 = (
            mpm.mpf(-15) / 4 * mpm.log(2) * z(4)
            - mpm.mpf(9) / 4 * z(2) * z(3)
            + mpm.mpf(31) / 4 * z(5)
        )
        assert abs(eval_value("S", (1, 1, 1, 2), None, 40) - s1112) <= tol
    budget.check()


def test_psi_value_triple_agreement():
    budget = Budget(600)
    tol = mpm.mpf(10) ** -25
    comps = [(2,), (3,), (4,), (1, 2), (1, 3), (2, 2), (1, 1, 2)]
    for k in comps:
        for s in range(2, 6):
            with workdps(50):
                series = eval_psi_series(k, s, 40)
                via_conv = psi_via_convT(k, s).numeric(40)
                via_t = psi_via_mtv(k, s - 1).numeric(40)
                assert abs(series - via_conv) <= tol, (k, s)
                assert abs(series - via_t) <= tol, (k, s)
    budget.check()


def test_inversion_weight_pi_power_closed_form():
    budget = Budget(1)
    for j in (1, 2, 3):
        for w in range(7):
            assert zed(j, j + w).pinormal() == zed_closed(j, j + w)
    budget.check()


def _brute_linear_extensions(X):
    count = 0
    for perm in permutations(range(X.n)):
        seen = set()
        ok = True
        for a in perm:
            if X.below[a] - seen:
                ok = False
                break
            seen.add(a)
        if ok:
            count += 1
    return count


def test_poset_expansion_values_and_counts():
    budget = Budget(300)
    tol = mpm.mpf(10) ** -25

    def comps(total):
        if total == 0:
            yield ()
            return
        for first in range(1, total + 1):
            for rest in comps(total - first):
                yield (first,) + rest

    for p in range(1, 5):
        for wk in range(1, 7 - p):
            for k in comps(wk):
                X = psi_poset(k, p + 1)
                lc = expand(X)
                nterms = sum(c for _, c in lc)
                assert nterms == linear_extension_count(X)
                assert nterms == _brute_linear_extensions(X)
                with workdps(50):
                    got = eval_lincomb(lc, 40)
                    want = eval_psi_series(k, p + 1, 40)
                    assert abs(got - want) <= tol, (k, p)
    budget.check()


def test_dimension_upper_bounds(kit):
    budget = Budget(1800)
    assert [kit.dim_upper_bound(w) for w in range(2, 6)] == [1, 2, 4, 7]
    for w in range(2, 6):
        assert TABLE1[w] == fibonacci_bound(w)
    # every harvested row through weight 6 vanishes numerically
    tol = mpm.mpf(10) ** -25
    for w in range(2, 7):
        rels = kit.harvest(w)
        n = len(rels.generators)
        with workdps(50):
            log2 = mpm.log(2)
            vals = [kit.value(g) for g in rels.generators]
            vals += [log2 * kit.value(g) for _, g in rels.extended]
            for row in rels.rows:
                total = mpm.mpf(0)
                for col, c in row.items():
                    total += mpm.mpf(c.numerator) / c.denominator * vals[col]
                assert abs(total) <= tol, w
    report = kit.report(6)
    excess = report["bound"] - TABLE1[6]
    print("weight-6 bound %d, reference %d, excess %d"
          % (report["bound"], TABLE1[6], excess))
    assert report["bound"] >= TABLE1[6]
    assert excess == 0  # no unharvested relations remain at weight 6
    budget.check()


def test_log_integral_family_against_quadrature():
    budget = Budget(120)
    tol = mpm.mpf(10) ** -25
    for case in ("ee", "eo", "oe", "oo"):
        for n in (1, 2, 3):
            for m in (1, 2, 3):
                with workdps(50):
                    closed = thm_I_closed(case, n, m).numeric(40)
                    quad = thm_I_quadrature(case, n, m, 35)
                    assert abs(closed - quad) <= tol, (case, n, m)
    with workdps(50):
        assert abs(thm_I_closed("oo", 1, 1).numeric(40) + 1) <= tol
        assert abs(thm_I_closed("ee", 1, 1).numeric(40) - mpm.pi**2 / 3) <= tol
    budget.check()


def test_identity_fixture_catalogue():
    budget = Budget(600)
    for name, lhs, rhs in fixture_identities():
        ok, resid = verify_identity(lhs, rhs, 40)
        assert ok, (name, resid)
    budget.check()


def _random_ast(rng, depth):
    if depth == 0 or rng.random() < 0.4:
        kind = rng.choice(["num", "const", "val"])
        if kind == "num":
            return ("num", Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        if kind == "const":
            return ("const", rng.choice(["log2", "pi"]))
        name = rng.choice(shell.VALUE_NAMES)
        if name == "M":
            args = tuple(rng.choice([-1, 1]) * rng.randint(1, 4)
                         for _ in range(rng.randint(1, 3)))
            return ("val", "M", args)
        if name in ("T", "t", "S"):
            args = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
            return ("val", name, args)
        if name == "zeta":
            args = tuple(rng.choice([-1, 1]) * rng.randint(1, 4)
                         for _ in range(rng.randint(1, 3)))
            return ("val", "zeta", args)
        if name == "psi":
            k = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
            return ("val", "psi", (k, rng.randint(1, 4)))
        if name == "Tconv":
            k = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
            l = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 3)))
            return ("val", "Tconv", (k, l))
        if name == "Hsum2":
            return ("val", "Hsum2", (rng.randint(2, 6),))
        if name == "THsum":
            return ("val", "THsum", ((1,), rng.randint(1, 4)))
        return ("val", "HHsum",
                ((rng.randint(1, 3), rng.randint(1, 3)), rng.randint(2, 5)))
    op = rng.choice(["add", "sub", "mul"])
    return (op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))


def test_cli_round_trip_and_exit_codes(capsys):
    budget = Budget(60)
    rng = random.Random(6)
    for _ in range(1000):
        ast = _random_ast(rng, 5)
        assert shell.parse(shell.render(ast)) == ast
    # exit codes: 2 syntax, 3 domain, 4 verification failure
    assert shell.run(["eval", "M(2) +"]) == 2
    assert shell.run(["eval", "M(1)"]) == 3
    assert shell.run(["eval", "M(3)"]) == 0
    capsys.readouterr()
    bad = "tests_bad_fixture.jsonl"
    import os
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, bad)
        with open(path, "w") as fh:
            fh.write('{"name": "wrong", "lhs": "M(2)", "rhs": "0", "digits": 30}\n')
        assert shell.run(["verify", path]) == 4
    capsys.readouterr()
    assert shell.run(["dim", "--weight", "4"]) == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["weight"] == 4
    assert doc["bound"] == 4
    assert isinstance(doc["generators"], list)
    assert isinstance(doc["rank"], int)
    assert isinstance(doc["fibonacci_bound"], int)
    for rel in doc["relations"]:
        assert set(rel) == {"coeffs", "source", "tdegree"}
        assert all(isinstance(kk, str) and isinstance(vv, str)
                   for kk, vv in rel["coeffs"].items())
    budget.check()
