r"""Arbitrary-precision numerics for mixed values.

Everything here is driven by a requested decimal-digit target D (default 50,
overridable through the MMV_KIT_DIGITS environment variable).  The central
evaluator `eval_word` computes the iterated integral of an admissible word by
splitting the integration path at the fixed point c = sqrt(2) - 1 of the
involution t -> (1-t)/(1+t):

    I_[0,1](w) = sum over splits w = u.v of I_[c,1](u) * I_[0,c](v)

and I_[c,1](u) = I_[0,c](delta(reverse(u))) with the letter substitution
delta: 0 -> -, - -> 0, + -> 0 + (+) - (-).  Both halves are truncated power
series evaluated at c, so the tail ratio is c ~ 0.414 and roughly 2.6*D terms
suffice for D digits.

Exact-rational partial sums (the T_n / S_n tables and multiple harmonic sums)
live here as well, together with the naive-summation oracle, the convoluted
T-value evaluator, the A-function, and a fully series-based evaluator for the
psi integrals.
"""

import os
from fractions import Fraction
from functools import lru_cache

import mpmath as mpm

from .indexcore import (
    Index,
    index_to_word,
    word_to_index,
    alternating_to_mmv,
)
from .wordalg import Word, LinComb


# ---------------------------------------------------------------------------
# precision plumbing

DEFAULT_DIGITS = 50


def default_digits():
    raw = os.environ.get("MMV_KIT_DIGITS")
    if raw:
        try:
            return max(5, int(raw))
        except ValueError:
            pass
    return DEFAULT_DIGITS


def workdps(dps):
    """Context manager setting mpmath working precision in decimal digits."""
    return mpm.workdps(int(dps))


# ---------------------------------------------------------------------------
# constants

def const_pi(D=None):
    D = D or default_digits()
    with workdps(D + 10):
        return +mpm.pi


def const_log2(D=None):
    D = D or default_digits()
    with workdps(D + 10):
        return mpm.log(2)


def const_zeta(n, D=None):
    if n < 2:
        raise ValueError("zeta symbol requires n >= 2")
    D = D or default_digits()
    with workdps(D + 10):
        return mpm.zeta(n)


def const_zetabar(n, D=None):
    """zetabar(n) = (1 - 2^{1-n}) zeta(n) for n >= 2; log 2 at n = 1; 1/2 at n = 0."""
    if n < 0:
        raise ValueError("zetabar requires n >= 0")
    D = D or default_digits()
    with workdps(D + 10):
        if n == 0:
            return mpm.mpf(1) / 2
        if n == 1:
            return mpm.log(2)
        return (1 - mpm.mpf(2) ** (1 - n)) * mpm.zeta(n)


# ---------------------------------------------------------------------------
# exact partial sums: T_n, S_n, multiple harmonic sums

_T_TABLES = {}
_S_TABLES = {}
_Z_TABLES = {}
_ZSTAR_TABLES = {}


def _grow_ts(tables, k, n, odd_strict):
    """Shared table builder for the T_n / S_n recurrences.

    odd_strict selects the parity pattern: for T the entry at odd position has
    odd denominator (2j-1) and is summed up to j = n; for S the roles of the
    two parities swap.  Each appended entry carries a factor 2.
    """
    k = tuple(k)
    tab = tables.get(k)
    if tab is None:
        if not k:
            tab = [Fraction(1)]
        else:
            tab = [Fraction(1) if False else Fraction(0)]
        tables[k] = tab
    if not k:
        while len(tab) <= n:
            tab.append(Fraction(1))
        tab[0] = Fraction(1)
        return tab
    inner = _grow_ts(tables, k[:-1], n, odd_strict)
    m = len(k)
    kr = k[-1]
    # "closed" position: sum runs to j <= n; "open": j <= n-1
    if odd_strict:
        closed = m % 2 == 1  # T: odd positions use (2j-1), summed to n
        odd_denom = m % 2 == 1
    else:
        closed = m % 2 == 0  # S: even positions use (2j-1), summed to n
        odd_denom = m % 2 == 0
    while len(tab) <= n:
        j = len(tab)  # computing value at index j from j-1
        prev = tab[j - 1]
        if closed:
            term = 2 * inner[j] / Fraction((2 * j - 1) if odd_denom else 2 * j) ** kr
            tab.append(prev + term)
        else:
            if j >= 2:
                jj = j - 1
                term = 2 * inner[jj] / Fraction((2 * jj - 1) if odd_denom else 2 * jj) ** kr
                tab.append(prev + term)
            else:
                tab.append(Fraction(0))
    return tab


def partial_T(k, n):
    """Multiple T-harmonic sum T_n(k), exact rational."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _grow_ts(_T_TABLES, tuple(k), n, True)[n]


def partial_S(k, n):
    """Multiple S-harmonic sum S_n(k), exact rational."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _grow_ts(_S_TABLES, tuple(k), n, False)[n]


def _grow_mhs(tables, k, n, strict):
    k = tuple(k)
    tab = tables.get(k)
    if tab is None:
        tab = [Fraction(1)] if not k else [Fraction(0)]
        tables[k] = tab
    if not k:
        while len(tab) <= n:
            tab.append(Fraction(1))
        return tab
    inner = _grow_mhs(tables, k[:-1], n, strict)
    kr = k[-1]
    while len(tab) <= n:
        j = len(tab)
        cap = inner[j - 1] if strict else inner[j]
        tab.append(tab[j - 1] + cap / Fraction(j) ** kr)
    return tab


def partial_zeta(k, n):
    """Multiple harmonic sum over strictly increasing indices <= n."""
    return _grow_mhs(_Z_TABLES, tuple(k), n, True)[n]


def partial_zeta_star(k, n):
    """Multiple harmonic star sum (non-strict inequalities)."""
    return _grow_mhs(_ZSTAR_TABLES, tuple(k), n, False)[n]


def harmonic(n, k=1):
    """H_n^{(k)} as an exact rational."""
    return partial_zeta((k,), n)


# ---------------------------------------------------------------------------
# signatures of the classical families

def t_signature(r):
    return tuple(-1 for _ in range(r))


def T_signature(r):
    """Alternating, starting odd: (-1, +1, -1, ...)."""
    return tuple(-1 if i % 2 == 1 else 1 for i in range(1, r + 1))


def S_signature(r):
    """Alternating, starting even: (+1, -1, +1, ...)."""
    return tuple(-1 if i % 2 == 0 else 1 for i in range(1, r + 1))


def T_index(k):
    return Index(k, T_signature(len(tuple(k))))


def S_index(k):
    return Index(k, S_signature(len(tuple(k))))


def t_index(k):
    return Index(k, t_signature(len(tuple(k))))


# ---------------------------------------------------------------------------
# series engine

def _term_count(D):
    with workdps(20):
        c = mpm.sqrt(2) - 1
        return int(mpm.ceil(D / abs(mpm.log10(c)))) + 16


def _series_coeffs(s, L):
    """Coefficients of F(x) = int_0^x s as a power series, degree <= L.

    Letters act right to left: `0` divides coefficient k by k, `-` is a Cauchy
    product with 2*sum x^{2j} followed by integration, `+` the same with
    2*sum x^{2j+1}.  Returns a list of length L+1.
    """
    f = [mpm.mpf(0)] * (L + 1)
    f[0] = mpm.mpf(1)
    for ch in reversed(s):
        if ch == "0":
            g = [mpm.mpf(0)] * (L + 1)
            for k in range(1, L + 1):
                g[k] = f[k] / k
            f = g
        else:
            # parity prefix sums pe[k] = sum_{i <= k, i = k mod 2} f[i]
            pe = [mpm.mpf(0)] * (L + 1)
            for k in range(L + 1):
                pe[k] = f[k] + (pe[k - 2] if k >= 2 else 0)
            g = [mpm.mpf(0)] * (L + 1)
            if ch == "-":
                for k in range(1, L + 1):
                    g[k] = 2 * pe[k - 1] / k
                # m_{k-1} = 2*pe[k-1] matches parity k-1
            else:  # '+'
                for k in range(2, L + 1):
                    g[k] = 2 * pe[k - 2] / k
            f = g
    return f


def _polyval(coeffs, x):
    acc = mpm.mpf(0)
    for ck in reversed(coeffs):
        acc = acc * x + ck
    return acc


_DUAL_SUB = {
    "0": (("-", 1),),
    "-": (("0", 1),),
    "+": (("0", 1), ("+", 1), ("-", -1)),
}


def _dual_reverse(s):
    """delta(reverse(s)) as {word-string: coefficient}; no admissibility demand."""
    out = {"": Fraction(1)}
    for ch in reversed(s):
        nxt = {}
        for w, c in out.items():
            for sub, sc in _DUAL_SUB[ch]:
                nw = w + sub
                nxt[nw] = nxt.get(nw, Fraction(0)) + c * sc
        out = nxt
    return out


@lru_cache(maxsize=4096)
def _eval_word_str(s, D):
    guard = 10 + len(s)
    with workdps(D + guard):
        c = mpm.sqrt(2) - 1
        L = _term_count(D)
        cache = {}

        def at_c(word_s):
            if word_s in cache:
                return cache[word_s]
            val = _polyval(_series_coeffs(word_s, L), c)
            cache[word_s] = val
            return val

        total = mpm.mpf(0)
        for i in range(len(s) + 1):
            u, v = s[:i], s[i:]
            right = at_c(v) if v else mpm.mpf(1)
            if u:
                left = mpm.mpf(0)
                for ws, coeff in _dual_reverse(u).items():
                    left += mpm.mpf(coeff.numerator) / coeff.denominator * at_c(ws)
            else:
                left = mpm.mpf(1)
            total += left * right
        result = +total
    return result


def eval_word(w, D=None):
    """Value of an admissible word to D decimal digits (absolute error)."""
    w = Word(w)
    if not w.is_admissible():
        raise ValueError("word is not admissible: %r" % w)
    D = D or default_digits()
    return _eval_word_str(w.s, D)


def eval_lincomb(lc, D=None):
    """Numeric value of a LinComb over admissible words."""
    D = D or default_digits()
    with workdps(D + 10):
        total = mpm.mpf(0)
        for w, c in lc:
            total += mpm.mpf(c.numerator) / c.denominator * eval_word(w, D)
        return +total


def eval_word_naive(w, N, D=20):
    """Truncated nested summation, with a crude analytic tail bound.

    Returns (value, bound).  Test oracle only; the bound is an analytic
    estimate of shape O(N^{1-k_r} log^r N), not a certified enclosure.
    """
    w = Word(w)
    if not w.is_admissible():
        raise ValueError("word is not admissible: %r" % w)
    idx = word_to_index(w)
    if N <= 0:
        return mpm.mpf(0), mpm.inf
    with workdps(D + 10):
        cum = None
        for level, (k, e) in enumerate(zip(idx.k, idx.eps)):
            new = [mpm.mpf(0)] * (N + 1)
            acc = mpm.mpf(0)
            for n in range(1, N + 1):
                if (n % 2 == 1) == (e == -1):
                    inner = cum[n - 1] if cum is not None else mpm.mpf(1)
                    acc += 2 * inner / mpm.mpf(n) ** k
                new[n] = acc
            cum = new
        value = +cum[N]
        r = idx.depth
        kr = idx.k[-1]
        logN = mpm.log(N + 2)
        bound = (2 * logN + 4) ** (r - 1) * 4 * mpm.mpf(N) ** (1 - kr) / max(kr - 1, 1)
        return value, +bound


# ---------------------------------------------------------------------------
# named values

def eval_index(idx, D=None):
    """M(k; eps) for an admissible index."""
    return eval_word(index_to_word(idx), D)


def eval_value(kind, k, signs=None, D=None):
    """Dispatch for the named families.

    kind: 'M' (signs required), 'T', 't', 'S', or 'zeta' (signs = alternation
    signs of an alternating multiple zeta value).
    """
    from .indexcore import AltIndex

    k = tuple(k)
    D = D or default_digits()
    if kind == "M":
        return eval_index(Index(k, signs), D)
    if kind == "T":
        return eval_index(T_index(k), D)
    if kind == "S":
        return eval_index(S_index(k), D)
    if kind == "t":
        val = eval_index(t_index(k), D)
        with workdps(D + 10):
            return +(val / mpm.mpf(2) ** len(k))
    if kind == "zeta":
        if signs is None:
            signs = tuple(1 for _ in k)
        alt = AltIndex(k, signs)
        if k[-1] < 2:
            raise ValueError(
                "alternating zeta with last entry 1 is outside the evaluator's domain"
            )
        with workdps(D + 10):
            total = mpm.mpf(0)
            for idx, c in alternating_to_mmv(alt).items():
                total += mpm.mpf(c.numerator) / c.denominator * eval_index(idx, D)
            return +total
    raise ValueError("unknown value kind %r" % kind)


# ---------------------------------------------------------------------------
# convoluted T-values

def conv_terms(kpart, lpart):
    """T(k (*) l) as an exact LinComb over admissible MMV indices.

    The defining series is a sum over a shared outer index of products of two
    parity-constrained partial-sum chains; interleaving the chains (merging
    only slots of equal parity, with a factor 2 per merge) turns it into a
    finite combination of MMVs.
    """
    kpart = tuple(kpart)
    lpart = tuple(lpart)
    if not kpart or not lpart:
        raise ValueError("both parts must be nonempty")
    m, p = len(kpart), len(lpart)
    ck, cl = kpart[:-1], lpart[:-1]
    ek = T_signature(len(ck))
    el = T_signature(len(cl)) if (m - p) % 2 == 0 else S_signature(len(cl))
    outer_k = kpart[-1] + lpart[-1]
    outer_e = -1 if m % 2 == 1 else 1

    def rec(ka, ea, kb, eb):
        if not ka:
            return [(kb, eb, Fraction(1))]
        if not kb:
            return [(ka, ea, Fraction(1))]
        out = []
        for kk, ee, c in rec(ka[:-1], ea[:-1], kb, eb):
            out.append((kk + (ka[-1],), ee + (ea[-1],), c))
        for kk, ee, c in rec(ka, ea, kb[:-1], eb[:-1]):
            out.append((kk + (kb[-1],), ee + (eb[-1],), c))
        if ea[-1] == eb[-1]:
            for kk, ee, c in rec(ka[:-1], ea[:-1], kb[:-1], eb[:-1]):
                out.append((kk + (ka[-1] + kb[-1],), ee + (ea[-1],), 2 * c))
        return out

    terms = {}
    for kk, ee, c in rec(ck, ek, cl, el):
        idx = Index(kk + (outer_k,), ee + (outer_e,))
        terms[idx] = terms.get(idx, Fraction(0)) + c
    return LinComb(terms)


def eval_convT(kpart, lpart, D=None):
    """Numeric convoluted T-value T(k (*) l)."""
    D = D or default_digits()
    lc = conv_terms(kpart, lpart)
    with workdps(D + 10):
        total = mpm.mpf(0)
        for idx, c in lc:
            total += mpm.mpf(c.numerator) / c.denominator * eval_index(idx, D)
        return +total


# ---------------------------------------------------------------------------
# the A-function

def eval_A(k, x, D=None):
    """A(k; x): the generating integral of the T-chain up to x, |x| < 1."""
    D = D or default_digits()
    with workdps(D + 15):
        x = mpm.mpf(x)
        if abs(x) >= 1:
            raise ValueError("eval_A requires |x| < 1")
        if x == 0:
            return mpm.mpf(0)
        word = index_to_word(T_index(k))
        L = int(mpm.ceil(D / abs(mpm.log10(abs(x))))) + 16
        if L > 200000:
            raise ValueError("x too close to 1 for the requested precision")
        return +_polyval(_series_coeffs(word.s, L), x)


# ---------------------------------------------------------------------------
# psi values, fully by series

def _antider_terms(a, j):
    """Antiderivative of tau^a log^j tau as [(coeff-Fraction, a', j')] terms.

    a >= -1, j >= 0.  For a >= 0 the result is tau^{a+1} * sum_i c_i log^i;
    for a = -1 it is log^{j+1} tau / (j+1).
    """
    if a == -1:
        return [(Fraction(1, j + 1), 0, j + 1)]
    out = []
    fj = 1
    # j!/i! with alternating sign: sum_{i=0}^{j} (-1)^{j-i} (j!/i!) log^i / (a+1)^{j-i+1}
    from math import factorial

    for i in range(j + 1):
        c = Fraction((-1) ** (j - i) * factorial(j), factorial(i))
        c /= Fraction(a + 1) ** (j - i + 1)
        out.append((c, a + 1, i))
    return out


def _antider_at(x, logx, a, j):
    """Numeric antiderivative of tau^a log^j tau evaluated at x."""
    total = mpm.mpf(0)
    for c, aa, jj in _antider_terms(a, j):
        total += (
            mpm.mpf(c.numerator)
            / c.denominator
            * x**aa
            * (logx**jj if jj else 1)
        )
    return total


def _ls_mul_even_geo(P, L):
    """Multiply a log-series by 2*sum sigma^{2i}, truncating degrees at L."""
    out = {}
    for (j, a), coeff in P.items():
        i = 0
        while a + 2 * i <= L:
            key = (j, a + 2 * i)
            out[key] = out.get(key, mpm.mpf(0)) + 2 * coeff
            i += 1
    return out


def _ls_integrate_to_c(P, c, logc, L):
    """int_sigma^c of a log-series: new log-series in sigma (plus constants)."""
    out = {}
    for (j, a), coeff in P.items():
        const = coeff * _antider_at(c, logc, a, j)
        out[(0, 0)] = out.get((0, 0), mpm.mpf(0)) + const
        for cc, aa, jj in _antider_terms(a, j):
            if aa > L:
                continue
            key = (jj, aa)
            out[key] = out.get(key, mpm.mpf(0)) - coeff * mpm.mpf(
                cc.numerator
            ) / cc.denominator
    return {k: v for k, v in out.items() if v != 0}


def _logseries_tail_integral(y, c, logc, L):
    """I_[sigma,c](y) for a word y over {0,-}, as a log-series in sigma."""
    P = {(0, 0): mpm.mpf(1)}
    for ch in y:
        if ch == "0":
            P = {(j, a - 1): coeff for (j, a), coeff in P.items()}
        else:  # '-'
            P = _ls_mul_even_geo(P, L)
        P = _ls_integrate_to_c(P, c, logc, L)
    return P


def eval_psi_series(k, s, D=None):
    """psi(k; s) for integer s = p+1 >= 1, via pure series manipulation.

    psi(k; p+1) = ((-1)^p / p!) * int_0^1 log^p((1-x)/(1+x)) A(k; x) dx/x.
    The integral is split at the fixed point c = sqrt(2)-1; the upper part is
    pulled back by u = (1-x)/(1+x) and expanded into polynomials in u and
    log u, so no numeric quadrature is involved.  Independent of the
    closed-form evaluation routes.
    """
    from math import factorial

    k = tuple(k)
    if k[-1] < 2 and len(k) == 1 and s <= 1:
        raise ValueError("divergent parameters")
    p = s - 1
    if p < 0:
        raise ValueError("s must be a positive integer")
    D = D or default_digits()
    guard = 15 + sum(k) + 2 * p
    with workdps(D + guard):
        c = mpm.sqrt(2) - 1
        logc = mpm.log(c)
        L = _term_count(D) + 32
        # the T-chain word of k over {0,-}, admissible or not
        word = "".join("0" * (ki - 1) + "-" for ki in reversed(k))

        # ---- lower part: x in [0, c]
        f = _series_coeffs(word, L)  # series of A(k; x), f[0] = 0
        # log((1-x)/(1+x)) = -2 artanh x
        lg = [mpm.mpf(0)] * (L + 1)
        for n in range(1, L + 1, 2):
            lg[n] = mpm.mpf(-2) / n
        g = [mpm.mpf(1)] + [mpm.mpf(0)] * L
        for _ in range(p):
            h = [mpm.mpf(0)] * (L + 1)
            for i in range(L + 1):
                gi = g[i]
                if gi == 0:
                    continue
                for jj in range(1, L + 1 - i, 2):
                    h[i + jj] += gi * lg[jj]
            g = h
        # integrand series: g(x) * f(x) / x
        fx = [mpm.mpf(0)] * (L + 1)
        for i in range(L):
            fx[i] = f[i + 1]
        prod = [mpm.mpf(0)] * (L + 1)
        for i in range(L + 1):
            gi = g[i]
            if gi == 0:
                continue
            for jj in range(L + 1 - i):
                if fx[jj] != 0:
                    prod[i + jj] += gi * fx[jj]
        lower = mpm.mpf(0)
        for i in range(L + 1):
            if prod[i] != 0:
                lower += prod[i] * c ** (i + 1) / (i + 1)

        # ---- upper part: x in [c, 1] pulled back to u in [0, c]
        # A(k; x(u)) = sum over splits word = u'.v' of
        #   I_[u,c](delta(reverse(u'))) * F_{v'}(c)
        series_cache = {}

        def at_c(ws):
            if ws not in series_cache:
                series_cache[ws] = _polyval(_series_coeffs(ws, L), c)
            return series_cache[ws]

        G = {}
        for i in range(len(word) + 1):
            upart, vpart = word[:i], word[i:]
            right = at_c(vpart) if vpart else mpm.mpf(1)
            if i == 0:
                Q = {(0, 0): mpm.mpf(1)}
            else:
                y = "".join("-" if ch == "0" else "0" for ch in reversed(upart))
                Q = _logseries_tail_integral(y, c, logc, L)
            for key, coeff in Q.items():
                G[key] = G.get(key, mpm.mpf(0)) + right * coeff
        # multiply by 2/(1-u^2) and log^p u, then integrate over [0, c]
        G = _ls_mul_even_geo(G, L)
        upper = mpm.mpf(0)
        for (j, a), coeff in G.items():
            upper += coeff * _antider_at(c, logc, a, j + p)

        out = (mpm.mpf(-1) ** p / factorial(p)) * (lower + upper)
        return +out
