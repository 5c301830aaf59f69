r"""Words over {0, +, -}, formal linear combinations, shuffle and stuffle.

Letters: `0` is dt/t, `-` is 2dt/(1-t^2), `+` is 2t dt/(1-t^2).  The leftmost
letter of a word is the outermost form (nearest t = 1).  A word lies in A1 if
it does not end in `0`; it is admissible if additionally it starts with `0`.
Admissible words biject with admissible indices via `indexcore`.

Products:
  * shuffle  -- interleavings; multiplies iterated integrals.
  * stuffle  -- quasi-shuffle on z-blocks z_{k,e} = 0^{k-1} (+ or -), with a
    sign-twisted merge term that is present only for equal block signs (and
    then carries a factor 2); multiplies the underlying series.
"""

from fractions import Fraction

_LETTERS = "0+-"
_ORD = {"0": 0, "+": 1, "-": 2}


class Word:
    """An immutable sequence of letters over {0, +, -}."""

    __slots__ = ("s",)

    def __init__(self, s=""):
        if isinstance(s, Word):
            s = s.s
        s = "".join(s)
        if any(ch not in _LETTERS for ch in s):
            raise ValueError("invalid letter in %r" % s)
        self.s = s

    @property
    def weight(self):
        return len(self.s)

    @property
    def depth(self):
        return len(self.s) - self.s.count("0")

    def __len__(self):
        return len(self.s)

    def __eq__(self, other):
        return isinstance(other, Word) and self.s == other.s

    def __hash__(self):
        return hash(("word", self.s))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        # degrevlex with 0 < + < -
        return (len(self.s), tuple(_ORD[c] for c in reversed(self.s)))

    def __add__(self, other):
        return Word(self.s + Word(other).s)

    def __repr__(self):
        return self.s if self.s else "e"

    def in_a1(self):
        return self.s == "" or self.s[-1] != "0"

    def is_admissible(self):
        return len(self.s) >= 2 and self.s[0] == "0" and self.s[-1] != "0"

    def reverse(self):
        return Word(self.s[::-1])

    def blocks(self):
        """Split a word in A1 into (k, sign) blocks, leftmost first."""
        if not self.in_a1():
            raise ValueError("word not in A1: %r" % self)
        out = []
        k = 1
        for ch in self.s:
            if ch == "0":
                k += 1
            else:
                out.append((k, -1 if ch == "-" else 1))
                k = 1
        return out

    @staticmethod
    def from_blocks(blocks):
        s = "".join("0" * (k - 1) + ("-" if e == -1 else "+") for k, e in blocks)
        return Word(s)


EMPTY = Word("")


def zblock(k, eps):
    """The generator z_{k,eps} = 0^{k-1} (+ or -)."""
    if k < 1 or eps not in (1, -1):
        raise ValueError("bad block (%r, %r)" % (k, eps))
    return Word("0" * (k - 1) + ("-" if eps == -1 else "+"))


class LinComb:
    """Finite formal sum of basis elements with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {terms: Fraction(1)}
        self.terms = {b: Fraction(c) for b, c in terms.items() if c != 0}

    @staticmethod
    def of(basis, coeff=1):
        return LinComb({basis: Fraction(coeff)})

    @staticmethod
    def zero():
        return LinComb()

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, Fraction(0)) + c
        return LinComb(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LinComb({b: -c for b, c in self.terms.items()})

    def scale(self, c):
        c = Fraction(c)
        return LinComb({b: c * x for b, x in self.terms.items()})

    def map_basis(self, f):
        """Apply basis -> LinComb (or basis) map, extended linearly."""
        out = LinComb()
        for b, c in self.terms.items():
            img = f(b)
            if not isinstance(img, LinComb):
                img = LinComb.of(img)
            out = out + img.scale(c)
        return out

    def coeff(self, b):
        return self.terms.get(b, Fraction(0))

    def _sorted(self):
        try:
            return sorted(self.terms.items(), key=lambda t: t[0].sort_key())
        except AttributeError:
            return sorted(self.terms.items(), key=lambda t: repr(t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for b, c in self._sorted():
            mag = abs(c)
            body = "[%s]" % (b,) if mag == 1 else "%s*[%s]" % (mag, b)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def _bilinear(f):
    """Extend a Word x Word -> LinComb product to LinComb inputs."""

    def g(u, v, *a, **kw):
        if isinstance(u, LinComb) or isinstance(v, LinComb):
            if not isinstance(u, LinComb):
                u = LinComb.of(u)
            if not isinstance(v, LinComb):
                v = LinComb.of(v)
            out = LinComb()
            for bu, cu in u:
                for bv, cv in v:
                    out = out + f(bu, bv, *a, **kw).scale(cu * cv)
            return out
        return f(u, v, *a, **kw)

    return g


_shuffle_memo = {}


@_bilinear
def shuffle(u, v):
    """All interleavings of u and v, with multiplicity."""
    u, v = Word(u), Word(v)
    if not u.s:
        return LinComb.of(v)
    if not v.s:
        return LinComb.of(u)
    key = (u.s, v.s)
    got = _shuffle_memo.get(key)
    if got is not None:
        return got
    a = shuffle(Word(u.s[:-1]), v).map_basis(lambda w: w + Word(u.s[-1]))
    b = shuffle(u, Word(v.s[:-1])).map_basis(lambda w: w + Word(v.s[-1]))
    out = a + b
    _shuffle_memo[key] = out
    return out


def tau_shift(eps, w):
    """Multiply every block sign of a word in A1 by eps."""
    if eps == 1:
        if not Word(w).in_a1():
            raise ValueError("word not in A1")
        return Word(w)
    w = Word(w)
    return Word.from_blocks([(k, eps * e) for k, e in w.blocks()])


_stuffle_memo = {}


@_bilinear
def stuffle(u, v):
    """Quasi-shuffle of words in A1 with the sign-twisted doubled merge.

    Operates on series-convention words: each block z_{k,q} records an
    exponent and the sign carried by that slot of the sum directly, so that
    merging two slots multiplies their signs (and doubles, since the merged
    slot ranges over the same parity class).  Use word_to_index_st /
    index_to_word_st to move between these words and indices; the integral
    convention words that shuffle expects encode signatures differently.
    """
    u, v = Word(u), Word(v)
    if not u.in_a1() or not v.in_a1():
        raise ValueError("stuffle arguments must lie in A1")
    if not u.s:
        return LinComb.of(v)
    if not v.s:
        return LinComb.of(u)
    key = (u.s, v.s)
    got = _stuffle_memo.get(key)
    if got is not None:
        return got
    ub = u.blocks()
    vb = v.blocks()
    s, e = ub[-1]
    t, h = vb[-1]
    u1 = Word.from_blocks(ub[:-1])
    v1 = Word.from_blocks(vb[:-1])
    ze = zblock(s, e)
    zh = zblock(t, h)
    out = stuffle(tau_shift(e, u1), v).map_basis(
        lambda w: tau_shift(e, w) + ze
    )
    out = out + stuffle(u, tau_shift(h, v1)).map_basis(
        lambda w: tau_shift(h, w) + zh
    )
    if e == h:
        zm = zblock(s + t, e)
        out = out + stuffle(tau_shift(e, u1), tau_shift(e, v1)).map_basis(
            lambda w: tau_shift(e, w) + zm
        ).scale(2)
    _stuffle_memo[key] = out
    return out


def stuffle_indices(a, b):
    """Series-level quasi-shuffle of two admissible indices.

    M(a) * M(b) equals the sum of the returned terms; merging two slots is
    allowed only when their signatures agree and then contributes a factor 2.
    Returns a LinComb over Index.
    """
    from .indexcore import Index

    if not (a.is_admissible() and b.is_admissible()):
        raise ValueError("indices must be admissible")

    def rec(ka, ea, kb, eb):
        # interleave from the outer (largest) end; returns list of
        # (k-tuple, eps-tuple, coeff) built outer-first then reversed later
        if not ka:
            return [(kb, eb, Fraction(1))]
        if not kb:
            return [(ka, ea, Fraction(1))]
        out = []
        for k, e, c in rec(ka[:-1], ea[:-1], kb, eb):
            out.append((k + (ka[-1],), e + (ea[-1],), c))
        for k, e, c in rec(ka, ea, kb[:-1], eb[:-1]):
            out.append((k + (kb[-1],), e + (eb[-1],), c))
        if ea[-1] == eb[-1]:
            for k, e, c in rec(ka[:-1], ea[:-1], kb[:-1], eb[:-1]):
                out.append((k + (ka[-1] + kb[-1],), e + (ea[-1],), 2 * c))
        return out

    terms = {}
    for k, e, c in rec(a.k, a.eps, b.k, b.eps):
        idx = Index(k, e)
        terms[idx] = terms.get(idx, Fraction(0)) + c
    return LinComb(terms)


_DUAL_SUB = {
    "0": (("-", 1),),
    "-": (("0", 1),),
    "+": (("0", 1), ("+", 1), ("-", -1)),
}


def dual_word(w):
    """Duality involution on admissible odd-signature (MMVo) words.

    Induced by t -> (1-t)/(1+t): reverse the word, then substitute
    0 -> -, - -> 0, + -> 0 + (+) - (-), expanded multilinearly.
    Value-preserving; applying it twice gives back w.
    """
    from .indexcore import word_to_index

    if isinstance(w, LinComb):
        return w.map_basis(dual_word)
    w = Word(w)
    if not w.is_admissible():
        raise ValueError("word is not admissible: %r" % w)
    if word_to_index(w).eps[0] != -1:
        raise ValueError("duality applies only to odd-signature words (MMVo)")
    out = {Word(""): Fraction(1)}
    for ch in reversed(w.s):
        nxt = {}
        for wrd, c in out.items():
            for sub, sc in _DUAL_SUB[ch]:
                nw = wrd + Word(sub)
                nxt[nw] = nxt.get(nw, Fraction(0)) + c * sc
        out = nxt
    return LinComb(out)


def is_admissible(w):
    return Word(w).is_admissible()
