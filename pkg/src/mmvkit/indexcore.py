r"""Compositions with signatures, and their word encodings.

An MMV index is a composition (k_1, ..., k_r) of positive integers together
with a signature vector (eps_1, ..., eps_r) over {+1, -1}.  Here k_1 is the
innermost (smallest) summation index and eps_j = -1 constrains the j-th index
to be odd.  The value is

    M(k; eps) = sum_{0 < n_1 < ... < n_r, parity(n_j) fixed by eps_j}
                2^r / (n_1^{k_1} ... n_r^{k_r}).

Words over the three letters `0`, `+`, `-` (see `wordalg`) encode these values
as iterated integrals; the conversions in this module fix the normative
correspondence between the two pictures.
"""

from fractions import Fraction
from math import comb


class Index:
    """A composition with a +-1 signature vector, innermost entry first."""

    __slots__ = ("k", "eps")

    def __init__(self, k, eps):
        k = tuple(int(x) for x in k)
        eps = tuple(int(e) for e in eps)
        if len(k) != len(eps) or not k:
            raise ValueError("k and eps must be nonempty and of equal length")
        if any(x < 1 for x in k):
            raise ValueError("entries of k must be positive")
        if any(e not in (1, -1) for e in eps):
            raise ValueError("signature entries must be +1 or -1")
        self.k = k
        self.eps = eps

    @property
    def weight(self):
        return sum(self.k)

    @property
    def depth(self):
        return len(self.k)

    def is_admissible(self):
        return self.k[-1] >= 2

    def __eq__(self, other):
        return isinstance(other, Index) and self.k == other.k and self.eps == other.eps

    def __hash__(self):
        return hash((self.k, self.eps))

    def __lt__(self, other):
        # deterministic ordering: by (depth, k, eps); -1 sorts after +1
        return (self.depth, self.k, self.eps) < (other.depth, other.k, other.eps)

    def __repr__(self):
        return "M(%s)" % ",".join(
            ("-%d" if e == -1 else "%d") % x for x, e in zip(self.k, self.eps)
        )

    def render(self):
        return repr(self)


class AltIndex:
    """An alternating multiple zeta value index: composition plus signs."""

    __slots__ = ("k", "sgn")

    def __init__(self, k, sgn):
        k = tuple(int(x) for x in k)
        sgn = tuple(int(s) for s in sgn)
        if len(k) != len(sgn) or not k:
            raise ValueError("k and sgn must be nonempty and of equal length")
        if any(x < 1 for x in k):
            raise ValueError("entries of k must be positive")
        if any(s not in (1, -1) for s in sgn):
            raise ValueError("signs must be +1 or -1")
        self.k = k
        self.sgn = sgn

    @property
    def weight(self):
        return sum(self.k)

    @property
    def depth(self):
        return len(self.k)

    def is_admissible(self):
        return (self.k[-1], self.sgn[-1]) != (1, 1)

    def __eq__(self, other):
        return isinstance(other, AltIndex) and self.k == other.k and self.sgn == other.sgn

    def __hash__(self):
        return hash(("alt", self.k, self.sgn))

    def __repr__(self):
        return "zeta(%s)" % ",".join(
            ("-%d" if s == -1 else "%d") % x for x, s in zip(self.k, self.sgn)
        )


def q_transform(eps):
    """(e1,...,er) -> (e1 e2, e2 e3, ..., e_{r-1} e_r, e_r)."""
    eps = tuple(eps)
    if not eps:
        raise ValueError("empty signature vector")
    return tuple(eps[i] * eps[i + 1] for i in range(len(eps) - 1)) + (eps[-1],)


def q_inverse(eta):
    """Inverse of q_transform: e_r = h_r, then e_i = h_i * e_{i+1}."""
    eta = tuple(eta)
    if not eta:
        raise ValueError("empty signature vector")
    out = [eta[-1]]
    for h in reversed(eta[:-1]):
        out.append(h * out[-1])
    return tuple(reversed(out))


def index_to_word(idx):
    """The word of an admissible index, leftmost letter outermost.

    Scanning the word right to left, the i-th non-`0` letter opens the
    summation index m_i; a `-` flips the running parity (the innermost `-`
    starts odd), a `+` keeps it (the innermost `+` starts even), and each `0`
    raises the current exponent by one.  Equivalently: writing the index's
    blocks as z_{k_i, h_i} with h_i = eps_{i-1} * eps_i (eps_0 = +1), the word
    is the concatenation block_r block_{r-1} ... block_1, where z_{k,+1} =
    0^{k-1} + and z_{k,-1} = 0^{k-1} -.
    """
    from .wordalg import Word

    if not isinstance(idx, Index):
        raise TypeError("expected an Index")
    if not idx.is_admissible():
        raise ValueError("index is not admissible: %r" % (idx,))
    letters = []
    prev = 1
    blocks = []
    for k, e in zip(idx.k, idx.eps):
        h = prev * e
        blocks.append("0" * (k - 1) + ("-" if h == -1 else "+"))
        prev = e
    for b in reversed(blocks):
        letters.extend(b)
    return Word("".join(letters))


def word_to_index(w):
    """Inverse of index_to_word on admissible words."""
    from .wordalg import Word

    if not isinstance(w, Word):
        w = Word(w)
    if not w.is_admissible():
        raise ValueError("word is not admissible: %r" % (w,))
    # split into blocks 0^{k-1} s, leftmost block outermost
    blocks = w.blocks()  # list of (k, h) leftmost first
    ks = []
    eps = []
    prev = 1
    for k, h in reversed(blocks):  # innermost first
        e = prev * h
        ks.append(k)
        eps.append(e)
        prev = e
    return Index(ks, eps)


def dual_composition(k):
    """Classical dual of an admissible composition.

    Writing k = ({1}^{a1-1}, b1+1, ..., {1}^{an-1}, bn+1), the dual is
    ({1}^{bn-1}, an+1, ..., {1}^{b1-1}, a1+1).  An involution.
    """
    k = tuple(int(x) for x in k)
    if not k or k[-1] < 2:
        raise ValueError("composition is not admissible")
    # parse into (a_i, b_i) pairs scanning innermost-first entries:
    # k_1 ... k_r with runs of 1s followed by an entry >= 2
    pairs = []
    ones = 0
    for x in k:
        if x == 1:
            ones += 1
        else:
            pairs.append((ones + 1, x - 1))  # (a, b)
            ones = 0
    out = []
    for a, b in reversed(pairs):
        out.extend([1] * (b - 1))
        out.append(a + 1)
    return tuple(out)


def plus_index(k):
    """Increment the last (outermost) entry of a composition."""
    k = tuple(int(x) for x in k)
    if not k:
        raise ValueError("empty composition")
    return k[:-1] + (k[-1] + 1,)


def b_coeff(k, j):
    """prod_i binom(k_i + j_i - 1, j_i), exactly."""
    k = tuple(k)
    j = tuple(j)
    if len(k) != len(j):
        raise ValueError("depth mismatch")
    out = Fraction(1)
    for ki, ji in zip(k, j):
        out *= comb(ki + ji - 1, ji)
    return out


def compositions(p, n):
    """Yield all length-n tuples of nonnegative integers summing to p."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        yield (p,)
        return
    for first in range(p + 1):
        for rest in compositions(p - first, n - 1):
            yield (first,) + rest


def mmv_to_alternating(idx):
    """Expand M(k; eps) into alternating zeta values.

    M(k; eps) = sum_{S subset of positions} (prod_{j in S} eps_j) *
    zeta(k; sgn_S) where sgn_S is -1 exactly on S.
    """
    if not idx.is_admissible():
        raise ValueError("index is not admissible")
    r = idx.depth
    terms = {}
    for mask in range(1 << r):
        coeff = Fraction(1)
        sgn = []
        for jpos in range(r):
            if mask >> jpos & 1:
                coeff *= idx.eps[jpos]
                sgn.append(-1)
            else:
                sgn.append(1)
        alt = AltIndex(idx.k, sgn)
        terms[alt] = terms.get(alt, Fraction(0)) + coeff
    return {a: c for a, c in terms.items() if c != 0}


def alternating_to_mmv(alt):
    """Expand zeta(k; sgn) = 2^{-r} sum_eps (prod_{j: sgn_j=-1} eps_j) M(k; eps).

    Exact inversion of mmv_to_alternating; returns {Index: Fraction}.
    """
    r = alt.depth
    out = {}
    scale = Fraction(1, 2**r)
    for mask in range(1 << r):
        eps = tuple(-1 if mask >> jpos & 1 else 1 for jpos in range(r))
        coeff = scale
        for jpos in range(r):
            if alt.sgn[jpos] == -1:
                coeff *= eps[jpos]
        idx = Index(alt.k, eps)
        out[idx] = out.get(idx, Fraction(0)) + coeff
    return {i: c for i, c in out.items() if c != 0}


def index_to_word_st(idx):
    """The series-convention word of an index (any index, divergent or not).

    In the series (stuffle) picture a word z_{k_1,e_1} ... z_{k_r,e_r} with
    the leftmost block innermost represents M(k; q(e)); this returns that word
    for a given index, i.e. blocks (k_i, q_inverse(eps)_i) left to right.
    Under this correspondence the quasi-shuffle recursion on words is exactly
    the series stuffle, and divergence (outermost exponent 1) shows up as the
    rightmost block being a single non-0 letter.
    """
    from .wordalg import Word

    return Word.from_blocks(list(zip(idx.k, q_inverse(idx.eps))))


def word_to_index_st(w):
    """Inverse of index_to_word_st; defined for any word in A1."""
    from .wordalg import Word

    blocks = Word(w).blocks()
    return Index(tuple(k for k, _ in blocks), q_transform(tuple(e for _, e in blocks)))


def formal_index(w):
    """The parity-propagation index of any word in A1 (integral convention),
    without requiring admissibility."""
    from .wordalg import Word

    blocks = Word(w).blocks()
    ks = []
    eps = []
    prev = 1
    for k, h in reversed(blocks):
        e = prev * h
        ks.append(k)
        eps.append(e)
        prev = e
    return Index(ks, eps)


def parse_index(entries):
    """Build an Index from signed integers: -k means odd signature."""
    ks = []
    eps = []
    for e in entries:
        e = int(e)
        if e == 0:
            raise ValueError("zero entry")
        ks.append(abs(e))
        eps.append(-1 if e < 0 else 1)
    return Index(ks, eps)
