r"""Regularization of divergent words into T-polynomials.

A divergent word still has a well-defined value once the divergence is traded
for a formal variable T.  Two extensions exist:

  * reg_shuffle works on integral-convention words (leftmost letter
    outermost); it peels leading non-0 letters using the shuffle product and
    sends the single letters + and - to T - log2 and T + log2.
  * reg_stuffle works on series-convention words (leftmost block innermost,
    see indexcore.index_to_word_st); it peels trailing z_{1,e} blocks using
    the quasi-shuffle product and sends z_{1,+1} to T and z_{1,-1} to
    T + 2 log2.

The rho map compares the two regularizations; reg_dbsf equates them on the
same underlying index and returns the resulting family of linear relations
among convergent values, one per T-degree.

Coefficients mix exact rationals with symbolic constant monomials in log2 and
zeta(n); numeric substitution only happens in tests and verification.
"""

from fractions import Fraction
from math import factorial

import mpmath as mpm

from .wordalg import Word, LinComb, shuffle, stuffle, tau_shift, zblock
from .indexcore import formal_index, index_to_word, index_to_word_st, word_to_index_st


# ---------------------------------------------------------------------------
# symbolic constants

class ConstMonomial:
    """A monomial in the symbols log2, pi, zeta(2), zeta(3), ...

    Exponents may be negative (needed for the 1/log2 coefficients of the
    Z-tilde inversion weights).
    """

    __slots__ = ("exps",)

    def __init__(self, exps=None):
        exps = dict(exps or {})
        for name, e in list(exps.items()):
            if e == 0:
                del exps[name]
                continue
            if name not in ("log2", "pi") and not (
                name.startswith("zeta(") and name.endswith(")")
            ):
                raise ValueError("unknown constant symbol %r" % name)
            if name.startswith("zeta(") and int(name[5:-1]) < 2:
                raise ValueError("zeta symbols only for n >= 2")
        self.exps = tuple(sorted(exps.items()))

    @staticmethod
    def one():
        return ConstMonomial()

    @staticmethod
    def log2(e=1):
        return ConstMonomial({"log2": e})

    @staticmethod
    def pi(e=1):
        return ConstMonomial({"pi": e})

    @staticmethod
    def zeta(n, e=1):
        return ConstMonomial({"zeta(%d)" % n: e})

    def __mul__(self, other):
        exps = dict(self.exps)
        for name, e in other.exps:
            exps[name] = exps.get(name, 0) + e
        return ConstMonomial(exps)

    def __eq__(self, other):
        return isinstance(other, ConstMonomial) and self.exps == other.exps

    def __hash__(self):
        return hash(("cmono", self.exps))

    def degree(self):
        """Weight of the monomial (log2 and pi count 1 per power, zeta(n) n)."""
        total = 0
        for name, e in self.exps:
            total += e * (1 if name in ("log2", "pi") else int(name[5:-1]))
        return total

    def numeric(self, D=50):
        with mpm.workdps(D + 10):
            val = mpm.mpf(1)
            for name, e in self.exps:
                if name == "log2":
                    base = mpm.log(2)
                elif name == "pi":
                    base = mpm.pi
                else:
                    base = mpm.zeta(int(name[5:-1]))
                val *= base**e
            return +val

    def __repr__(self):
        if not self.exps:
            return "1"
        parts = []
        for name, e in self.exps:
            parts.append(name if e == 1 else "%s^%d" % (name, e))
        return "*".join(parts)

    def sort_key(self):
        return (self.degree(), self.exps)


MONO_ONE = ConstMonomial.one()


def _ckey(mono, word):
    return (mono, word)


def clincomb_of(word, mono=MONO_ONE, coeff=1):
    return LinComb({_ckey(mono, Word(word)): Fraction(coeff)})


# ---------------------------------------------------------------------------
# T-polynomials

class TPoly:
    """Polynomial in T whose coefficients are LinCombs over
    (ConstMonomial, Word) pairs."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for deg, lc in (coeffs or {}).items():
            if len(lc):
                self.coeffs[int(deg)] = lc

    @staticmethod
    def zero():
        return TPoly()

    @staticmethod
    def const(lc):
        return TPoly({0: lc})

    @staticmethod
    def of_word(word, mono=MONO_ONE, coeff=1, deg=0):
        return TPoly({deg: clincomb_of(word, mono, coeff)})

    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, deg):
        return self.coeffs.get(deg, LinComb())

    def __add__(self, other):
        out = dict(self.coeffs)
        for d, lc in other.coeffs.items():
            out[d] = out.get(d, LinComb()) + lc
        return TPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return TPoly({d: lc.scale(c) for d, lc in self.coeffs.items()})

    def map_words(self, f):
        """Apply a Word -> Word/LinComb-over-Word map to every basis word."""

        def g(key):
            mono, w = key
            img = f(w)
            if isinstance(img, LinComb):
                return LinComb(
                    {(mono, w2): c for (w2, c) in img.terms.items()}
                )
            return LinComb.of((mono, img))

        return TPoly({d: lc.map_basis(g) for d, lc in self.coeffs.items()})

    def mul(self, other, word_mul=None):
        """Product of T-polynomials.

        word_mul(w1, w2) -> LinComb over Word chooses how nonempty basis
        words multiply (shuffle or stuffle); if omitted, one of the two words
        must be empty.
        """
        out = {}
        for d1, lc1 in self.coeffs.items():
            for d2, lc2 in other.coeffs.items():
                acc = out.setdefault(d1 + d2, {})
                for (m1, w1), c1 in lc1:
                    for (m2, w2), c2 in lc2:
                        mono = m1 * m2
                        coeff = c1 * c2
                        if not w1.s or not w2.s:
                            w = w1 if w1.s else w2
                            key = (mono, w)
                            acc[key] = acc.get(key, Fraction(0)) + coeff
                        else:
                            if word_mul is None:
                                raise ValueError(
                                    "word product required for nonempty words"
                                )
                            for w, c in word_mul(w1, w2):
                                key = (mono, w)
                                acc[key] = acc.get(key, Fraction(0)) + coeff * c
        return TPoly({d: LinComb(t) for d, t in out.items()})

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def numeric(self, T=0, D=50, eval_word_fn=None):
        """Substitute a numeric T and evaluate all symbols and words."""
        from .numeval import eval_word

        eval_word_fn = eval_word_fn or (lambda w: eval_word(w, D))
        with mpm.workdps(D + 10):
            T = mpm.mpf(T)
            total = mpm.mpf(0)
            for d, lc in self.coeffs.items():
                for (mono, w), c in lc:
                    v = mpm.mpf(c.numerator) / c.denominator * mono.numeric(D)
                    if w.s:
                        v *= eval_word_fn(w)
                    total += v * T**d
            return +total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            lc = self.coeffs[d]
            body = repr(
                LinComb({(repr(m) + "|" + repr(w) if m.exps else repr(w)): c
                         for (m, w), c in lc.terms.items()})
            )
            parts.append(("(%s)" % body) + ("" if d == 0 else "*T^%d" % d if d > 1 else "*T"))
        return " + ".join(parts)


def _tvar(const_lc):
    """T + const as a TPoly (empty-word basis)."""
    return TPoly({1: LinComb.of((MONO_ONE, Word(""))), 0: const_lc})


# ---------------------------------------------------------------------------
# shuffle regularization (integral-convention words)

_REG_SHA = {}


def reg_shuffle(w, _active=None):
    """Shuffle-regularized T-polynomial of a word in A1.

    Admissible words map to themselves in degree 0; a leading divergent
    letter e is peeled through e sha rest = w + lower-divergence terms.
    Mixed leading runs (for example +-...) are genuinely ambiguous for this
    recursion and raise ValueError.
    """
    w = Word(w)
    if not w.in_a1():
        raise ValueError("word not in A1: %r" % w)
    if w.s in _REG_SHA:
        return _REG_SHA[w.s]
    if not w.s or w.is_admissible():
        out = TPoly.of_word(w)
        _REG_SHA[w.s] = out
        return out
    if w.s == "+":
        return _tvar(clincomb_of("", ConstMonomial.log2(), -1))
    if w.s == "-":
        return _tvar(clincomb_of("", ConstMonomial.log2(), 1))
    _active = _active or set()
    if w.s in _active:
        raise ValueError(
            "shuffle regularization does not terminate for %r "
            "(mixed leading divergent run)" % w
        )
    _active = _active | {w.s}
    head, rest = w.s[0], Word(w.s[1:])
    lower = shuffle(Word(head), rest)
    cw = lower.coeff(w)
    assert cw > 0
    val = reg_shuffle(Word(head))
    out = val.mul(reg_shuffle(rest, _active))
    for t, c in lower:
        if t == w:
            continue
        out = out - reg_shuffle(t, _active).scale(c)
    out = out.scale(Fraction(1, 1) / cw)
    _REG_SHA[w.s] = out
    return out


# ---------------------------------------------------------------------------
# stuffle regularization (series-convention words)

_REG_ST = {}


def reg_stuffle(w, _active=None):
    """Stuffle-regularized T-polynomial of a series-convention word in A1.

    Divergence sits in the rightmost block: the word is admissible exactly
    when its rightmost block has exponent >= 2.  A trailing z_{1,e} block is
    peeled through the quasi-shuffle product with z_{1,e} (conjugated by the
    sign shift for e = -1), whose only non-admissible term is the word
    itself.
    """
    w = Word(w)
    if not w.in_a1():
        raise ValueError("word not in A1: %r" % w)
    if w.s in _REG_ST:
        return _REG_ST[w.s]
    blocks = w.blocks() if w.s else []
    if not w.s or blocks[-1][0] >= 2:
        out = TPoly.of_word(w)
        _REG_ST[w.s] = out
        return out
    if w.s == "+":
        return _tvar(LinComb())
    if w.s == "-":
        return _tvar(clincomb_of("", ConstMonomial.log2(), 2))
    _active = _active or set()
    if w.s in _active:
        raise ValueError(
            "stuffle regularization does not terminate for %r" % w
        )
    _active = _active | {w.s}
    eps = blocks[-1][1]
    u = Word.from_blocks(blocks[:-1])
    # z_{1,eps} * tau_eps(u) contains w = u z_{1,eps} exactly once
    lower = stuffle(zblock(1, eps), tau_shift(eps, u))
    cw = lower.coeff(w)
    assert cw > 0, (w, lower)
    out = reg_stuffle(zblock(1, eps)).mul(reg_stuffle(tau_shift(eps, u), _active))
    for t, c in lower:
        if t == w:
            continue
        out = out - reg_stuffle(t, _active).scale(c)
    out = out.scale(Fraction(1) / cw)
    _REG_ST[w.s] = out
    return out


# ---------------------------------------------------------------------------
# the rho comparison map

def _rho_series(nmax):
    """Coefficients a_i of exp(sum_{n>=2} (-1)^n zeta(n) u^n / n), symbolic."""
    # log-series coefficients
    ell = [LinComb() for _ in range(nmax + 1)]
    for n in range(2, nmax + 1):
        ell[n] = LinComb.of(ConstMonomial.zeta(n), Fraction((-1) ** n, n))
    # exp via a_0 = 1, a_m = (1/m) sum_{n=1}^m n * ell_n * a_{m-n}
    a = [LinComb() for _ in range(nmax + 1)]
    a[0] = LinComb.of(MONO_ONE)
    for m in range(1, nmax + 1):
        acc = LinComb()
        for n in range(2, m + 1):
            if not len(ell[n]):
                continue
            prod = {}
            for m1, c1 in ell[n]:
                for m2, c2 in a[m - n]:
                    key = m1 * m2
                    prod[key] = prod.get(key, Fraction(0)) + c1 * c2 * n
            acc = acc + LinComb(prod)
        a[m] = acc.scale(Fraction(1, m))
    return a


def rho_map(P):
    """The comparison map rho applied degreewise to a T-polynomial.

    rho(T^n / n!) = sum_{i+j+m=n} a_i (-log2)^j / j! * T^m / m!, where the
    a_i come from exp(sum_{n>=2} (-1)^n zeta(n) u^n / n).
    """
    nmax = max(P.coeffs) if P.coeffs else 0
    a = _rho_series(nmax)
    out = TPoly()
    for n, lc in P.coeffs.items():
        for i in range(n + 1):
            for j in range(n - i + 1):
                m = n - i - j
                scalar = Fraction(factorial(n), factorial(j) * factorial(m))
                scalar *= Fraction((-1) ** j)
                piece = {}
                for ai_mono, ai_c in a[i]:
                    for (mono, w), c in lc:
                        key = (ai_mono * mono * ConstMonomial.log2(j), w)
                        piece[key] = piece.get(key, Fraction(0)) + ai_c * c * scalar
                if piece:
                    out = out + TPoly({m: LinComb(piece)})
    return out


# ---------------------------------------------------------------------------
# regularized double shuffle

def qside(w):
    """The series-convention word regularizing the same index as w."""
    return index_to_word_st(formal_index(w))


def reg_dbsf(w):
    """The regularized double-shuffle relation attached to a word in A1.

    Returns the T-polynomial reg_shuffle(w) - rho(reg_stuffle(qside(w)))
    with every basis word in the integral convention; each T-degree slice is
    a linear relation among admissible words with constant-monomial
    coefficients, and the whole polynomial is zero in value.
    """
    w = Word(w)
    sha = reg_shuffle(w)
    st = reg_stuffle(qside(w))
    st = st.map_words(lambda ws: index_to_word(word_to_index_st(ws)) if ws.s else ws)
    return sha - rho_map(st)
