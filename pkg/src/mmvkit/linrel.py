r"""Exact rational linear algebra over harvested relations.

Relations among same-weight values are collected from three sources: the
difference of shuffle and stuffle expansions of products of two admissible
values, duality of words whose outermost signature entry is odd, and the
degree-0 slices of the regularized double-shuffle comparison.  The last
source produces rows containing log2 * (lower-weight value) products; a
weight-level linear solve expresses each such product in plain same-weight
values, and zeta(n) factors are removed exactly through the single odd-sum
value of weight n.  Every row passes a high-precision numeric gate before it
is admitted.  Ranks are computed by exact fraction-free elimination with
deterministic pivoting, giving dimension upper bounds per weight.
"""

import json
from fractions import Fraction
from math import factorial

import mpmath as mpm

from .indexcore import Index, word_to_index, index_to_word, word_to_index_st, index_to_word_st, formal_index
from .wordalg import Word, LinComb, shuffle, stuffle, stuffle_indices, dual_word, zblock
from .regutils import reg_shuffle, reg_stuffle, _rho_series, MONO_ONE, ConstMonomial
from .numeval import workdps, eval_index

# dimension table of the value space by weight, 0 through 13
TABLE1 = [1, 0, 1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232, 376]

GATE_DIGITS = 40
GATE_TOL_EXP = -25


def fibonacci_bound(w):
    """F_w - 1 with F_0 = F_1 = 1."""
    a, b = 1, 1
    for _ in range(w - 1):
        a, b = b, a + b
    return (b if w else a) - 1


def generators(w):
    """All admissible indices of weight w, in deterministic order."""
    if w < 2:
        raise ValueError("weight must be >= 2")
    out = []

    def words(prefix, left):
        if left == 0:
            if prefix[-1] != "0":
                out.append(word_to_index(Word(prefix)))
            return
        for ch in "0+-":
            words(prefix + ch, left - 1)

    words("0", w - 1)
    return sorted(out)


def _divergent_words(w):
    """All weight-w words in A1 that start with a non-0 letter."""
    out = []

    def rec(prefix, left):
        if left == 0:
            if prefix[-1] != "0":
                out.append(Word(prefix))
            return
        for ch in "0+-":
            rec(prefix + ch, left - 1)

    for first in "+-":
        rec(first, w - 1)
    return out


def _zeta_word(n):
    """The index whose value is (2 - 2^(1-n)) zeta(n): the odd sum of weight n."""
    return Index((n,), (-1,))


def _integral_word(idx):
    """Word of any index (divergent allowed) under parity propagation."""
    prev = 1
    blocks = []
    for k, e in zip(idx.k, idx.eps):
        h = prev * e
        blocks.append("0" * (k - 1) + ("-" if h == -1 else "+"))
        prev = e
    return Word("".join(reversed(blocks)))


def _poly_mul(p, q):
    out = {}
    for (d1, l1), c1 in p.items():
        for (d2, l2), c2 in q.items():
            key = (d1 + d2, l1 + l2)
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}



def _a1_words(w):
    """All weight-w words not ending in 0, admissible and divergent alike."""
    out = []

    def rec(prefix, left):
        if left == 0:
            if prefix[-1] != "0":
                out.append(Word(prefix))
            return
        for ch in "0+-":
            rec(prefix + ch, left - 1)

    for first in "0+-":
        rec(first, w - 1)
    return out


# ---------------------------------------------------------------------------
# regularized double-shuffle comparison as an exact linear system
#
# Both regularization maps are homomorphisms, but the word-by-word recursion
# cannot express every divergent word inside the polynomial subalgebra the
# weight-1 letters generate.  Each inexpressible regularized value is kept as
# a formal polynomial in T with unknown coefficients.  Three equation
# families constrain them: the per-index rho comparison between the two
# regularizations, and the product identities of each homomorphism against
# the weight-1 letters.  Exact elimination of the unknown coordinates leaves
# precisely the word-level consequences.
#
# Equations are sparse dicts keyed by (T-degree, payload) where payload is
#   ("w", mono, wordstr)        a known value term mono * M(word)
#   ("s", wordstr, d, mono)     mono * (T^d coefficient of the unknown
#                               shuffle-regularized value of the word)
#   ("t", Index, d, mono)       the stuffle-side analogue


def _eq_from_tpoly(tp):
    out = {}
    for d, lc in tp.coeffs.items():
        for (mono, ww), c in lc:
            key = (d, ("w", mono, ww.s))
            out[key] = out.get(key, Fraction(0)) + Fraction(c)
    return out


def _pay_mul(pay, mono):
    if not mono.exps:
        return pay
    if pay[0] == "w":
        return ("w", pay[1] * mono, pay[2])
    return (pay[0], pay[1], pay[2], pay[3] * mono)


def _eq_add_into(dst, src, c=1):
    for k, v in src.items():
        dst[k] = dst.get(k, Fraction(0)) + v * c


def _eq_mul_poly(eq, poly):
    """Multiply an equation by a scalar polynomial {(Tdeg, log2pow): c}."""
    out = {}
    for (d, pay), c in eq.items():
        for (dt, lp), c2 in poly.items():
            key = (d + dt, _pay_mul(pay, ConstMonomial.log2(lp)) if lp else pay)
            out[key] = out.get(key, Fraction(0)) + c * c2
    return out


def _eq_rho(eq):
    """Apply the comparison map rho degreewise to an equation."""
    nmax = max((d for d, _ in eq), default=0)
    a = _rho_series(nmax)
    out = {}
    for (n, pay), c in eq.items():
        for i in range(n + 1):
            for ai_mono, ai_c in a[i]:
                for j in range(n - i + 1):
                    m = n - i - j
                    scalar = (c * ai_c * (-1) ** j
                              * Fraction(factorial(n), factorial(j) * factorial(m)))
                    mono = ai_mono * ConstMonomial.log2(j) if j else ai_mono
                    key = (m, _pay_mul(pay, mono))
                    out[key] = out.get(key, Fraction(0)) + scalar
    return {k: v for k, v in out.items() if v != 0}


_SH_EQ = {}


def _sh_eq(u):
    """Shuffle-regularized value of a word, as an equation polynomial."""
    got = _SH_EQ.get(u.s)
    if got is None:
        if not u.s or u.is_admissible():
            got = {(0, ("w", MONO_ONE, u.s)): Fraction(1)}
        else:
            try:
                got = _eq_from_tpoly(reg_shuffle(u))
            except ValueError:
                r = sum(1 for ch in u.s if ch != "0")
                got = {(d, ("s", u.s, d, MONO_ONE)): Fraction(1)
                       for d in range(r + 1)}
        _SH_EQ[u.s] = got
    return got


_ST_EQ = {}


def _st_eq(idx):
    """Stuffle-regularized value of an index, in integral-convention words."""
    got = _ST_EQ.get(idx)
    if got is None:
        try:
            tp = reg_stuffle(index_to_word_st(idx))
        except ValueError:
            got = {(d, ("t", idx, d, MONO_ONE)): Fraction(1)
                   for d in range(idx.depth + 1)}
        else:
            tp = tp.map_words(
                lambda x: _integral_word(word_to_index_st(x)) if x.s else x
            )
            got = _eq_from_tpoly(tp)
        _ST_EQ[idx] = got
    return got


_RDS_EQS = {}


def _rds_equations(wv):
    """All weight-wv equations of the regularized double-shuffle system."""
    got = _RDS_EQS.get(wv)
    if got is not None:
        return got
    eqs = []
    # (A) per-index comparison of the two regularizations
    for u in _divergent_words(wv):
        eq = dict(_sh_eq(u))
        _eq_add_into(eq, _eq_rho(_st_eq(formal_index(u))), -1)
        eqs.append(eq)
    # (B) shuffle homomorphism against the weight-1 letters
    for m in range(1, wv + 1):
        wt = wv - m
        if wt == 1:
            continue
        tails = [Word("")] if wt == 0 else _a1_words(wt)
        for a in range(m + 1):
            b = m - a
            poly = {(0, 0): Fraction(1)}
            for _ in range(a):
                poly = _poly_mul(poly, {(1, 0): Fraction(1), (0, 1): Fraction(-1)})
            for _ in range(b):
                poly = _poly_mul(poly, {(1, 0): Fraction(1), (0, 1): Fraction(1)})
            for x in tails:
                lc = LinComb.of(x)
                for ch in "+" * a + "-" * b:
                    new = {}
                    for ww, c in lc:
                        if ww.s:
                            for w2, c2 in shuffle(Word(ch), ww):
                                new[w2] = new.get(w2, Fraction(0)) + c * c2
                        else:
                            new[Word(ch)] = new.get(Word(ch), Fraction(0)) + c
                    lc = LinComb(new)
                eq = {}
                for ww, c in lc:
                    _eq_add_into(eq, _sh_eq(ww), Fraction(c))
                _eq_add_into(eq, _eq_mul_poly(_sh_eq(x), poly), -1)
                eqs.append(eq)
    # (C) stuffle homomorphism against the weight-1 letters
    for m in range(1, wv + 1):
        wt = wv - m
        if wt == 1:
            continue
        tails = [None] if wt == 0 else [formal_index(u) for u in _a1_words(wt)]
        for a in range(m + 1):
            b = m - a
            poly = {(0, 0): Fraction(1)}
            for _ in range(a):
                poly = _poly_mul(poly, {(1, 0): Fraction(1)})
            for _ in range(b):
                poly = _poly_mul(poly, {(1, 0): Fraction(1), (0, 1): Fraction(2)})
            for xidx in tails:
                lc = (LinComb.of(index_to_word_st(xidx)) if xidx
                      else LinComb.of(Word("")))
                for e in [1] * a + [-1] * b:
                    new = {}
                    for ww, c in lc:
                        if ww.s:
                            for w2, c2 in stuffle(zblock(1, e), ww):
                                new[w2] = new.get(w2, Fraction(0)) + c * c2
                        else:
                            new[zblock(1, e)] = new.get(zblock(1, e), Fraction(0)) + c
                    lc = LinComb(new)
                eq = {}
                for ww, c in lc:
                    _eq_add_into(eq, _st_eq(word_to_index_st(ww)), Fraction(c))
                base = _st_eq(xidx) if xidx else {(0, ("w", MONO_ONE, "")): Fraction(1)}
                _eq_add_into(eq, _eq_mul_poly(base, poly), -1)
                eqs.append(eq)
    got = [{k: v for k, v in eq.items() if v != 0} for eq in eqs]
    got = [eq for eq in got if eq]
    _RDS_EQS[wv] = got
    return got


def _mono_key(mono):
    return mono.exps


def _pay_key(pay):
    # unknown coordinates order strictly before known-word coordinates, so
    # any echelon row led by a word coordinate is free of unknowns
    if pay[0] == "w":
        return (1, 0, pay[2], (), 0, _mono_key(pay[1]))
    if pay[0] == "s":
        return (0, 0, pay[1], (), pay[2], _mono_key(pay[3]))
    return (0, 1, "", (pay[1].k, pay[1].eps), pay[2], _mono_key(pay[3]))


def _mono_weight(mono):
    tot = 0
    for name, e in mono.exps:
        if name.startswith("zeta("):
            tot += int(name[5:-1]) * e
        else:
            tot += e
    return tot


def _pay_weight(pay):
    if pay[0] == "w":
        return len(pay[2]) + _mono_weight(pay[1])
    if pay[0] == "s":
        return len(pay[1]) - pay[2] + _mono_weight(pay[3])
    return pay[1].weight - pay[2] + _mono_weight(pay[3])


def _eliminate_unknowns(rows):
    """Echelonize with unknown coordinates first; return word-only rows."""
    pivots = {}
    order = []
    for r in rows:
        r = dict(r)
        while r:
            lead = min(r, key=_pay_key)
            p = pivots.get(lead)
            if p is None:
                f = r[lead]
                pivots[lead] = {k: v / f for k, v in r.items()}
                order.append(lead)
                break
            f = r[lead]
            for k, v in p.items():
                r[k] = r.get(k, Fraction(0)) - f * v
            r = {k: v for k, v in r.items() if v != 0}
    return [pivots[lead] for lead in order if lead[0] == "w"]



def _monomials_upto(m):
    """All constant monomials in log2 and zeta(n) of weight 0..m."""
    out = [MONO_ONE]
    if m >= 1:
        gens = [("log2", 1)] + [("zeta(%d)" % n, n) for n in range(2, m + 1)]
        def rec(start, left, cur):
            for i in range(start, len(gens)):
                name, wt = gens[i]
                if wt > left:
                    continue
                nxt = dict(cur)
                nxt[name] = nxt.get(name, 0) + 1
                out.append(ConstMonomial(nxt))
                rec(i, left - wt, nxt)
        rec(0, m, {})
    return out


def regularized_relation_slices(w):
    """Weight-w word-level consequences of the regularized double shuffle.

    Builds the full equation system for weights 2..w, slices every equation
    by T-degree (each slice is weight homogeneous), eliminates the unknown
    regularized coefficients exactly, and returns the surviving weight-w
    rows as LinCombs over (monomial, word).
    """
    rows = []
    for wv in range(2, w + 1):
        monos = _monomials_upto(w - wv)
        for eq in _rds_equations(wv):
            for mono in monos:
                scaled = (eq if not mono.exps
                          else {(d, _pay_mul(pay, mono)): c
                                for (d, pay), c in eq.items()})
                by = {}
                for (d, pay), c in scaled.items():
                    by.setdefault(d, {})[pay] = c
                rows.extend(by.values())
    out = []
    for row in _eliminate_unknowns(rows):
        pay0 = next(iter(row))
        if _pay_weight(pay0) != w:
            continue
        lc = LinComb({(pay[1], Word(pay[2])): c for pay, c in row.items()})
        if len(lc):
            out.append(lc)
    return out


class _Reducer:
    """Rewrites (monomial, word) combinations into plain same-weight indices.

    zeta(n) factors become shuffle products with the weight-n odd-sum word;
    log2 factors are eliminated through the weight-level expressions computed
    by log2_table.  Raises KeyError when a needed log2 product has no
    harvested expression.
    """

    def __init__(self, kit):
        self.kit = kit

    def reduce(self, lc):
        out = {}
        for (mono, word), c in lc:
            for idx, cc in self._term(dict(mono.exps), word, Fraction(c)).items():
                out[idx] = out.get(idx, Fraction(0)) + cc
        return {i: c for i, c in out.items() if c != 0}

    def _term(self, exps, word, coeff):
        exps = {k: v for k, v in exps.items() if v}
        # peel zeta factors first: they stay inside the plain-word algebra
        for name in sorted(exps):
            if name.startswith("zeta("):
                n = int(name[5:-1])
                exps[name] -= 1
                coeff /= 2 - Fraction(1, 2 ** (n - 1))
                zw = index_to_word(_zeta_word(n))
                out = {}
                if word.s:
                    prod = shuffle(zw, word)
                else:
                    prod = LinComb.of(zw)
                for ww, c in prod:
                    for idx, cc in self._term(dict(exps), ww, coeff * c).items():
                        out[idx] = out.get(idx, Fraction(0)) + cc
                return out
        if "log2" in exps:
            if not word.s:
                raise KeyError("stray log2 constant")
            exps["log2"] -= 1
            table = self.kit.log2_table(word.weight + 1)
            expr = table[word_to_index(word)]  # may raise KeyError
            out = {}
            for idx, c in expr.items():
                sub = self._term(dict(exps), index_to_word(idx), coeff * c)
                for i2, c2 in sub.items():
                    out[i2] = out.get(i2, Fraction(0)) + c2
            return out
        if not word.s:
            raise KeyError("constant term with no symbol content")
        return {word_to_index(word): coeff}


class RelationSet:
    """Harvested rows over the weight-w generators.

    rows are sparse {column: Fraction} dicts; columns index the generator
    list, with extra columns appended for any kept log2-product extended
    generators.  sources records the origin of each row.
    """

    def __init__(self, weight, gens):
        self.weight = weight
        self.generators = list(gens)
        self.pos = {g: i for i, g in enumerate(self.generators)}
        self.extended = []  # list of ("log2", Index)
        self.rows = []
        self.sources = []
        self.tdegrees = []

    def column(self, key):
        if isinstance(key, Index):
            return self.pos[key]
        try:
            return len(self.generators) + self.extended.index(key)
        except ValueError:
            self.extended.append(key)
            return len(self.generators) + len(self.extended) - 1

    def ncols(self):
        return len(self.generators) + len(self.extended)

    def add(self, coeffs, source, tdegree=0):
        row = {c: v for c, v in coeffs.items() if v != 0}
        if row:
            self.rows.append(row)
            self.sources.append(source)
            self.tdegrees.append(tdegree)

    def to_json(self, table1=None, rank=None, bound=None):
        rels = []
        names = [repr(g) for g in self.generators] + [
            "log2*%r" % (g,) for _, g in self.extended
        ]
        for row, src, td in zip(self.rows, self.sources, self.tdegrees):
            rels.append(
                {
                    "coeffs": {names[c]: str(v) for c, v in sorted(row.items())},
                    "source": src,
                    "tdegree": td,
                }
            )
        if rank is None:
            rank = rational_rank(self.rows)
        if bound is None:
            bound = len(self.generators) + len(self.extended) - rank
        t1 = table1
        if t1 is None:
            t1 = TABLE1[self.weight] if self.weight < len(TABLE1) else None
        return json.dumps(
            {
                "weight": self.weight,
                "generators": names,
                "relations": rels,
                "rank": rank,
                "bound": bound,
                "fibonacci_bound": fibonacci_bound(self.weight),
                "table1": t1,
            },
            indent=1,
        )


def rational_rank(rows, order="markowitz"):
    """Exact rank of a sparse rational matrix given as {col: Fraction} dicts.

    Elimination is fraction-free in effect (rows are rescaled exactly);
    pivoting is deterministic: Markowitz fill-in score with lowest column
    index as tie-break, or plain lowest-column-first when order="colwise".
    """
    work = [dict(r) for r in rows if r]
    rank = 0
    while work:
        col_count = {}
        for r in work:
            for c in r:
                col_count[c] = col_count.get(c, 0) + 1
        if order == "markowitz":
            best = None
            for i, r in enumerate(work):
                for c in r:
                    score = (len(r) - 1) * (col_count[c] - 1)
                    key = (score, c, i)
                    if best is None or key < best[0]:
                        best = (key, i, c)
            _, pi, pc = best
        else:
            pc = min(col_count)
            pi = min(i for i, r in enumerate(work) if pc in r)
        pivot = work.pop(pi)
        pv = pivot[pc]
        rank += 1
        nxt = []
        for r in work:
            if pc in r:
                f = r[pc] / pv
                out = {}
                for c, v in r.items():
                    if c == pc:
                        continue
                    out[c] = v - f * pivot.get(c, Fraction(0))
                for c, v in pivot.items():
                    if c != pc and c not in r:
                        out[c] = -f * v
                out = {c: v for c, v in out.items() if v != 0}
                if out:
                    nxt.append(out)
            else:
                nxt.append(r)
        work = nxt
    return rank


class RelationKit:
    """Stateful harvester with shared caches across weights."""

    def __init__(self, digits=GATE_DIGITS):
        self.digits = digits
        self._values = {}
        self._log2 = {}
        self._log2_ext = {}
        self._harvest = {}
        self._slice_cache = {}
        self.reducer = _Reducer(self)

    def _slices(self, w):
        """Raw degree-0 relation slices at weight w, from single divergent
        words and from regularized product comparisons."""
        got = self._slice_cache.get(w)
        if got is None:
            got = regularized_relation_slices(w)
            self._slice_cache[w] = got
        return got

    # -- numeric gate ------------------------------------------------------

    def value(self, idx):
        got = self._values.get(idx)
        if got is None:
            got = eval_index(idx, self.digits)
            self._values[idx] = got
        return got

    def _gate(self, coeffs_by_index, extra=()):
        """True when the candidate relation vanishes numerically."""
        with workdps(self.digits + 10):
            total = mpm.mpf(0)
            for idx, c in coeffs_by_index.items():
                total += mpm.mpf(c.numerator) / c.denominator * self.value(idx)
            for val, c in extra:
                total += mpm.mpf(c.numerator) / c.denominator * val
            return abs(total) < mpm.mpf(10) ** GATE_TOL_EXP

    # -- log2-product expressions -----------------------------------------

    def log2_table(self, w):
        """Expressions log2 * M(u) -> plain weight-w values, u of weight w-1.

        Solved from the degree-0 regularized double-shuffle rows of weight w.
        Products with no derivable expression are simply absent.
        """
        got = self._log2.get(w)
        if got is not None:
            return got
        if w < 3:
            self._log2[w] = {}
            return self._log2[w]
        unknowns = []  # Index of weight w-1
        rows = []  # (plain {Index: c}, {unknown-pos: c})
        for lc in self._slices(w):
            plain = {}
            logpart = {}
            bad = False
            for (mono, ww), c in lc:
                exps = dict(mono.exps)
                le = exps.pop("log2", 0)
                if le == 0:
                    try:
                        for idx, cc in self.reducer._term(exps, ww, Fraction(c)).items():
                            plain[idx] = plain.get(idx, Fraction(0)) + cc
                    except KeyError:
                        bad = True
                        break
                    continue
                # strip one log2; reduce the rest of the monomial first
                exps["log2"] = le - 1
                try:
                    flat = self.reducer._term(exps, ww, Fraction(c))
                except KeyError:
                    bad = True
                    break
                for idx, cc in flat.items():
                    if idx not in unknowns:
                        unknowns.append(idx)
                    j = unknowns.index(idx)
                    logpart[j] = logpart.get(j, Fraction(0)) + cc
            if bad:
                continue
            plain = {i: c for i, c in plain.items() if c != 0}
            logpart = {j: c for j, c in logpart.items() if c != 0}
            if plain or logpart:
                rows.append((plain, logpart))
        # Gauss-Jordan reduction over the unknown columns: each pivot row
        # ends as log2*M(u_j) = -plain - sum over free columns, so every
        # unknown not tied to a genuinely underdetermined product resolves
        work = [(dict(p), dict(l)) for p, l in rows if l]
        pivrows = []
        pivot_of = {}
        for j in range(len(unknowns)):
            src = None
            for i, (p, l) in enumerate(work):
                if l.get(j):
                    src = work.pop(i)
                    break
            if src is None:
                continue
            p, l = src
            f = l[j]
            p = {a: c / f for a, c in p.items() if c != 0}
            l = {a: c / f for a, c in l.items() if c != 0}
            for seq in (work, pivrows):
                for i, (p2, l2) in enumerate(seq):
                    g = l2.get(j)
                    if not g:
                        continue
                    for a, c in p.items():
                        p2[a] = p2.get(a, Fraction(0)) - g * c
                    for a, c in l.items():
                        l2[a] = l2.get(a, Fraction(0)) - g * c
                    seq[i] = (
                        {a: b for a, b in p2.items() if b != 0},
                        {a: b for a, b in l2.items() if b != 0},
                    )
            pivot_of[j] = len(pivrows)
            pivrows.append((p, l))
        final = {}
        for j, i in pivot_of.items():
            p, l = pivrows[i]
            if l != {j: Fraction(1)}:
                continue
            u = unknowns[j]
            expr = {idx: -c for idx, c in p.items()}
            # gate: log2 * M(u) - expr == 0
            with workdps(self.digits + 10):
                lhs = mpm.log(2) * self.value(u)
            if self._gate({i2: -c for i2, c in expr.items()}, [(lhs, Fraction(1))]):
                final[u] = expr
        # partially determined products: expressible up to the free columns
        ext = {}
        for j, i in pivot_of.items():
            p, l = pivrows[i]
            if l == {j: Fraction(1)}:
                continue
            u = unknowns[j]
            plain = {idx: -c for idx, c in p.items()}
            frees = {unknowns[jj]: -c for jj, c in l.items() if jj != j}
            with workdps(self.digits + 10):
                extra = [(mpm.log(2) * self.value(u), Fraction(1))]
                for v, c in frees.items():
                    extra.append((mpm.log(2) * self.value(v), -c))
            if self._gate({i2: -c for i2, c in plain.items()}, extra):
                ext[u] = (plain, frees)
        self._log2_ext[w] = ext
        self._log2[w] = final
        return final

    # -- harvesting --------------------------------------------------------

    def harvest(self, w):
        if w < 2:
            raise ValueError("weight must be >= 2")
        got = self._harvest.get(w)
        if got is not None:
            return got
        rels = RelationSet(w, generators(w))
        # (i) shuffle minus stuffle over products of admissible pairs
        pairs = []
        for w1 in range(2, w - 1):
            w2 = w - w1
            if w2 < 2 or w2 < w1:
                continue
            for a in generators(w1):
                for b in generators(w2) if w2 != w1 else generators(w1):
                    if w1 == w2 and b < a:
                        continue
                    pairs.append((a, b))
        for a, b in pairs:
            coeffs = {}
            for ww, c in shuffle(index_to_word(a), index_to_word(b)):
                idx = word_to_index(ww)
                coeffs[idx] = coeffs.get(idx, Fraction(0)) + Fraction(c)
            for idx, c in stuffle_indices(a, b):
                coeffs[idx] = coeffs.get(idx, Fraction(0)) - Fraction(c)
            coeffs = {i: c for i, c in coeffs.items() if c != 0}
            if coeffs and self._gate(coeffs):
                rels.add(
                    {rels.column(i): c for i, c in coeffs.items()},
                    "DBSF",
                )
        # (ii) duality on words with odd outermost signature entry
        for g in rels.generators:
            if g.eps[0] != -1:
                continue
            coeffs = {g: Fraction(1)}
            for ww, c in dual_word(index_to_word(g)):
                idx = word_to_index(ww)
                coeffs[idx] = coeffs.get(idx, Fraction(0)) - Fraction(c)
            coeffs = {i: c for i, c in coeffs.items() if c != 0}
            if coeffs and self._gate(coeffs):
                rels.add({rels.column(i): c for i, c in coeffs.items()}, "duality")
        # (iii) regularized double-shuffle, degree-0 slices
        for lc in self._slices(w):
            if not len(lc):
                continue
            try:
                coeffs = self.reducer.reduce(lc)
            except KeyError:
                coeffs = self._reduce_with_extension(lc, rels)
                if coeffs is None:
                    continue
                plain = {i: c for i, c in coeffs.items() if isinstance(i, Index)}
                extra = []
                with workdps(self.digits + 10):
                    for key, c in coeffs.items():
                        if not isinstance(key, Index):
                            extra.append((mpm.log(2) * self.value(key[1]), c))
                if self._gate(plain, extra):
                    rels.add(
                        {rels.column(i): c for i, c in coeffs.items()},
                        "regDBSF",
                    )
                continue
            if coeffs and self._gate(coeffs):
                rels.add({rels.column(i): c for i, c in coeffs.items()}, "regDBSF")
        # (iv) distribution: summing over all signatures of a composition
        # gives 2^r zeta(k), and the all-even signature gives 2^(r-w) zeta(k)
        seen = set()
        for g in rels.generators:
            if g.k in seen:
                continue
            seen.add(g.k)
            coeffs = {Index(g.k, (1,) * g.depth): Fraction(2**w)}
            for mask in range(1 << g.depth):
                eps = tuple(-1 if mask >> j & 1 else 1 for j in range(g.depth))
                idx = Index(g.k, eps)
                coeffs[idx] = coeffs.get(idx, Fraction(0)) - 1
            coeffs = {i: c for i, c in coeffs.items() if c != 0}
            if coeffs and self._gate(coeffs):
                rels.add({rels.column(i): c for i, c in coeffs.items()}, "distribution")
        # (v) ideal closure: lower-weight relations times admissible values
        for w1 in range(2, w - 1):
            w2 = w - w1
            if w2 < 2:
                continue
            for rel in self._relation_basis(w1):
                for v in generators(w2):
                    coeffs = {}
                    for a, c in rel.items():
                        for idx, c2 in stuffle_indices(a, v):
                            coeffs[idx] = coeffs.get(idx, Fraction(0)) + c * Fraction(c2)
                    coeffs = {i: c for i, c in coeffs.items() if c != 0}
                    if coeffs and self._gate(coeffs):
                        rels.add(
                            {rels.column(i): c for i, c in coeffs.items()}, "DBSF"
                        )
                    coeffs = {}
                    for a, c in rel.items():
                        for ww, c2 in shuffle(index_to_word(a), index_to_word(v)):
                            idx = word_to_index(ww)
                            coeffs[idx] = coeffs.get(idx, Fraction(0)) + c * Fraction(c2)
                    coeffs = {i: c for i, c in coeffs.items() if c != 0}
                    if coeffs and self._gate(coeffs):
                        rels.add(
                            {rels.column(i): c for i, c in coeffs.items()}, "DBSF"
                        )
        self._harvest[w] = rels
        return rels

    def _relation_basis(self, w):
        """Echelon basis of the harvested row space at weight w, restricted
        to rows without extended-generator columns."""
        rels = self.harvest(w)
        n = len(rels.generators)
        echelon = []
        for r in rels.rows:
            if any(c >= n for c in r):
                continue
            r = dict(r)
            for pc, pr in echelon:
                if pc in r:
                    f = r[pc] / pr[pc]
                    for c, v in pr.items():
                        r[c] = r.get(c, Fraction(0)) - f * v
                    r = {c: v for c, v in r.items() if v != 0}
            if r:
                echelon.append((min(r), r))
        inv = {i: g for g, i in rels.pos.items()}
        return [{inv[c]: v for c, v in r.items()} for _, r in echelon]

    def _reduce_with_extension(self, lc, rels):
        """Reduce a row keeping unexpressible log2 products as extra columns."""
        out = {}
        for (mono, ww), c in lc:
            exps = dict(mono.exps)
            le = exps.pop("log2", 0)
            try:
                flat = self.reducer._term(exps, ww, Fraction(c))
            except KeyError:
                return None
            if le == 0:
                for idx, cc in flat.items():
                    out[idx] = out.get(idx, Fraction(0)) + cc
                continue
            for idx, cc in flat.items():
                # try to push log2 powers through the tables; keep the last
                # power as an extended generator when not expressible
                stack = [(le, idx, cc)]
                while stack:
                    n, i2, c2 = stack.pop()
                    if n == 0:
                        out[i2] = out.get(i2, Fraction(0)) + c2
                        continue
                    table = self.kit_table_safe(i2.weight + 1)
                    expr = table.get(i2)
                    if expr is not None:
                        for i3, c3 in expr.items():
                            stack.append((n - 1, i3, c2 * c3))
                        continue
                    ext = self._log2_ext.get(i2.weight + 1, {}).get(i2)
                    if ext is not None:
                        plain, frees = ext
                        for i3, c3 in plain.items():
                            stack.append((n - 1, i3, c2 * c3))
                        if n > 1:
                            return None
                        for v, c3 in frees.items():
                            key = ("log2", v)
                            out[key] = out.get(key, Fraction(0)) + c2 * c3
                        continue
                    if n > 1:
                        return None
                    key = ("log2", i2)
                    out[key] = out.get(key, Fraction(0)) + c2
        return {i: c for i, c in out.items() if c != 0}

    def kit_table_safe(self, w):
        try:
            return self.log2_table(w)
        except ValueError:
            return {}

    def dim_upper_bound(self, w):
        rels = self.harvest(w)
        rank = rational_rank(rels.rows)
        assert rank == rational_rank(rels.rows, order="colwise")
        return rels.ncols() - rank

    def report(self, w):
        rels = self.harvest(w)
        rank = rational_rank(rels.rows)
        bound = rels.ncols() - rank
        return {
            "weight": w,
            "generators": rels.ncols(),
            "rows": len(rels.rows),
            "rank": rank,
            "bound": bound,
            "fibonacci_bound": fibonacci_bound(w),
            "table1": TABLE1[w] if w < len(TABLE1) else None,
        }


def express(target, basis, rels):
    """Write a target combination in a candidate basis modulo harvested rows.

    target is {Index: Fraction}; basis a list of Index.  Returns {Index:
    Fraction} over the basis when target minus that combination lies in the
    row space of rels, else None (no derivation found; not a nonexistence
    proof).
    """
    ws = {i.weight for i in target} | {b.weight for b in basis}
    if len(ws) != 1 or ws != {rels.weight}:
        raise ValueError("all weights must match the relation set")
    echelon = []
    for r in rels.rows:
        r = dict(r)
        for pc, pr in echelon:
            if pc in r:
                f = r[pc] / pr[pc]
                for c, v in pr.items():
                    r[c] = r.get(c, Fraction(0)) - f * v
                r = {c: v for c, v in r.items() if v != 0}
        if r:
            echelon.append((min(r), r))

    def residue(vec):
        vec = dict(vec)
        for pc, pr in echelon:
            if pc in vec:
                f = vec[pc] / pr[pc]
                for c, v in pr.items():
                    vec[c] = vec.get(c, Fraction(0)) - f * v
                vec = {c: v for c, v in vec.items() if v != 0}
        return vec

    t = residue({rels.column(i): Fraction(c) for i, c in target.items() if c != 0})
    reduced = [residue({rels.column(b): Fraction(1)}) for b in basis]
    # solve t = sum x_j reduced_j exactly
    sys_rows = []  # over columns 0..len(basis)-1 plus rhs key "rhs"
    cols = set(t)
    for r in reduced:
        cols |= set(r)
    for c in sorted(cols):
        row = {j: r.get(c, Fraction(0)) for j, r in enumerate(reduced)}
        row = {j: v for j, v in row.items() if v != 0}
        row["rhs"] = t.get(c, Fraction(0))
        sys_rows.append(row)
    # Gaussian solve of the (overdetermined) system
    sol = {}
    work = sys_rows
    for j in range(len(basis)):
        piv = None
        for i, r in enumerate(work):
            if r.get(j):
                piv = i
                break
        if piv is None:
            continue
        pr = work.pop(piv)
        f = pr[j]
        pr = {c: v / f for c, v in pr.items()}
        for r in work:
            if r.get(j):
                g = r.pop(j)
                for c, v in pr.items():
                    if c != j:
                        r[c] = r.get(c, Fraction(0)) - g * v
        sol[j] = pr
    # consistency: remaining rows must have zero rhs and no basis columns
    for r in work:
        if any(c != "rhs" and r.get(c) for c in r) or r.get("rhs"):
            if any(v for c, v in r.items() if c != "rhs") or r.get("rhs"):
                return None
    # back-substitute
    xs = {}
    for j in sorted(sol, reverse=True):
        r = sol[j]
        val = r.get("rhs", Fraction(0))
        for c, v in r.items():
            if c in ("rhs", j):
                continue
            val -= v * xs.get(c, Fraction(0))
        xs[j] = val
    return {b: xs.get(j, Fraction(0)) for j, b in enumerate(basis)}
