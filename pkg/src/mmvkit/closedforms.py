r"""Closed-form evaluations and the identity-verification harness.

Symbolic right-hand sides for the log-integral family, for psi-values via
convoluted T-values and via T-values, for the Z / Z-tilde inversion weights
with their pi-power closed form, for convoluted-T inversions, and for the
contour-integration evaluation of double S-values.  A small expression-level
verifier runs identity fixtures numerically at high precision.

Conventions used by the contour formulas are centralized here:
zeta(0) = -1/2, zeta(1) = 0, zetabar(0) = 1/2, zetabar(1) = log2,
t~(1) = 2 log2 (except where a formula explicitly flips its sign), and
Ztilde(p,p) = 1/(2 log2).
"""

import json
from fractions import Fraction
from math import comb, factorial

import mpmath as mpm

from .indexcore import Index, AltIndex, dual_composition, plus_index, b_coeff, compositions
from .numeval import (
    default_digits,
    workdps,
    partial_T,
    partial_S,
    eval_value,
    eval_psi_series,
    eval_convT,
)
from .regutils import ConstMonomial, MONO_ONE


# ---------------------------------------------------------------------------
# symbols and closed forms

ONE_SYM = ("one",)


def _sym_numeric(sym, D):
    kind = sym[0]
    if kind == "one":
        return mpm.mpf(1)
    if kind in ("T", "S", "t"):
        return eval_value(kind, sym[1], None, D)
    if kind == "M":
        return eval_value("M", sym[1], sym[2], D)
    if kind == "zeta":
        return eval_value("zeta", sym[1], sym[2], D)
    if kind == "psi":
        return eval_psi_series(sym[1], sym[2], D)
    if kind == "Tconv":
        return eval_convT(sym[1], sym[2], D)
    raise ValueError("unknown symbol %r" % (sym,))


def _sym_repr(sym):
    kind = sym[0]
    if kind == "one":
        return "1"
    if kind in ("T", "S", "t"):
        return "%s(%s)" % (kind, ",".join(map(str, sym[1])))
    if kind == "M":
        return repr(Index(sym[1], sym[2]))
    if kind == "zeta":
        return repr(AltIndex(sym[1], sym[2]))
    if kind == "psi":
        return "psi(%s;%d)" % (",".join(map(str, sym[1])), sym[2])
    if kind == "Tconv":
        return "Tconv(%s|%s)" % (
            ",".join(map(str, sym[1])),
            ",".join(map(str, sym[2])),
        )
    return repr(sym)


class ClosedForm:
    """Linear combination of (constant-monomial, value-symbol) pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                self.terms[key] = c

    @staticmethod
    def zero():
        return ClosedForm()

    @staticmethod
    def const(c, mono=MONO_ONE):
        return ClosedForm({(mono, ONE_SYM): Fraction(c)})

    @staticmethod
    def sym(sym, coeff=1, mono=MONO_ONE):
        return ClosedForm({(mono, tuple(sym)): Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return ClosedForm(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return ClosedForm({k: c * v for k, v in self.terms.items()})

    def mul_scalar(self, other):
        """Product with a ClosedForm whose symbols are all the unit symbol."""
        out = {}
        for (m1, s1), c1 in self.terms.items():
            for (m2, s2), c2 in other.terms.items():
                if s1 != ONE_SYM and s2 != ONE_SYM:
                    raise ValueError("cannot multiply two value symbols")
            for (m2, s2), c2 in other.terms.items():
                sym = s1 if s2 == ONE_SYM else s2
                key = (m1 * m2, sym)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ClosedForm(out)

    def __eq__(self, other):
        return isinstance(other, ClosedForm) and self.terms == other.terms

    def numeric(self, D=None):
        D = D or default_digits()
        with workdps(D + 10):
            total = mpm.mpf(0)
            for (mono, sym), c in self.terms.items():
                v = mpm.mpf(c.numerator) / c.denominator
                v *= mono.numeric(D)
                if sym != ONE_SYM:
                    v *= _sym_numeric(sym, D)
                total += v
            return +total

    def pinormal(self):
        """Rewrite every zeta(2k) factor as a rational times pi^(2k)."""
        out = {}
        for (mono, sym), c in self.terms.items():
            exps = {}
            for name, e in mono.exps:
                if name.startswith("zeta(") and int(name[5:-1]) % 2 == 0:
                    n = int(name[5:-1])
                    rat, pexp = zeta_even_pi(n)
                    c = c * rat**e
                    exps["pi"] = exps.get("pi", 0) + pexp * e
                else:
                    exps[name] = exps.get(name, 0) + e
            key = (ConstMonomial(exps), sym)
            out[key] = out.get(key, Fraction(0)) + c
        return ClosedForm(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (mono, sym), c in sorted(
            self.terms.items(), key=lambda t: (repr(t[0][1]), t[0][0].exps)
        ):
            bits = []
            if abs(c) != 1 or (mono == MONO_ONE and sym == ONE_SYM):
                bits.append(str(abs(c)))
            if mono != MONO_ONE:
                bits.append(repr(mono))
            if sym != ONE_SYM:
                bits.append(_sym_repr(sym))
            body = "*".join(bits) if bits else "1"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def bernoulli_frac(n):
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n == 0:
        return Fraction(1)
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = Fraction(0)
        for j in range(m):
            s += comb(m + 1, j) * B[j]
        B.append(-s / (m + 1))
    return B[n]


def zeta_even_pi(n):
    """zeta(n) for even n as (rational, pi-exponent)."""
    if n % 2 or n < 2:
        raise ValueError("even n >= 2 required")
    k = n // 2
    rat = Fraction((-1) ** (k + 1)) * bernoulli_frac(2 * k) * 2 ** (2 * k - 1)
    rat /= factorial(2 * k)
    return rat, 2 * k


# ---------------------------------------------------------------------------
# convention helpers (scalar ClosedForms)

def zetabar_cf(m):
    """zetabar(m) = eta(m): 1/2 at m=0, log2 at m=1, (1-2^{1-m})zeta(m) else."""
    if m < 0:
        raise ValueError("negative argument")
    if m == 0:
        return ClosedForm.const(Fraction(1, 2))
    if m == 1:
        return ClosedForm.const(1, ConstMonomial.log2())
    return ClosedForm.const(1 - Fraction(1, 2 ** (m - 1)), ConstMonomial.zeta(m))


def zeta_cf(m):
    """Riemann zeta with the contour conventions zeta(0)=-1/2, zeta(1)=0."""
    if m == 0:
        return ClosedForm.const(Fraction(-1, 2))
    if m == 1:
        return ClosedForm.zero()
    return ClosedForm.const(1, ConstMonomial.zeta(m))


def ttilde_cf(m, one_is=2):
    """t~(m) = 2^m t(m) = (2^m - 1) zeta(m); t~(1) is one_is * log2."""
    if m == 1:
        return ClosedForm.const(one_is, ConstMonomial.log2())
    if m == 0:
        raise ValueError("t~(0) undefined")
    return ClosedForm.const(2**m - 1, ConstMonomial.zeta(m))


# ---------------------------------------------------------------------------
# the log-integral family

def thm_I_closed(case, n, m):
    """Closed form of int_0^1 t^a log^b((1-t)/(1+t)) dt.

    case selects the parities (a, b): ee = (2n-2, 2m), eo = (2n-2, 2m-1),
    oe = (2n-1, 2m), oo = (2n-1, 2m-1).  The T_n/S_n partial sums are exact
    rationals, so the result is a scalar closed form.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    out = ClosedForm.zero()
    if case == "ee":
        for j in range(m + 1):
            c = Fraction(2 * factorial(2 * m), 2 * n - 1) * partial_T((1,) * (2 * j), n)
            out = out + zetabar_cf(2 * m - 2 * j).scale(c)
    elif case == "eo":
        for j in range(m):
            c = Fraction(2 * factorial(2 * m - 1), 2 * n - 1)
            c *= partial_T((1,) * (2 * j), n)
            out = out - zetabar_cf(2 * m - 1 - 2 * j).scale(c)
        out = out - ClosedForm.const(
            Fraction(factorial(2 * m - 1), 2 * n - 1) * partial_S((1,) * (2 * m - 1), n)
        )
    elif case == "oe":
        for j in range(m):
            c = Fraction(factorial(2 * m), n) * partial_T((1,) * (2 * j + 1), n)
            out = out + zetabar_cf(2 * m - 1 - 2 * j).scale(c)
        out = out + ClosedForm.const(
            Fraction(factorial(2 * m), 2 * n) * partial_S((1,) * (2 * m), n)
        )
    elif case == "oo":
        for j in range(m):
            c = Fraction(factorial(2 * m - 1), n) * partial_T((1,) * (2 * j + 1), n)
            out = out - zetabar_cf(2 * m - 2 - 2 * j).scale(c)
    else:
        raise ValueError("case must be one of ee, eo, oe, oo")
    return out


def thm_I_quadrature(case, n, m, D=None):
    """The same integral by direct numeric quadrature (independent check)."""
    D = D or default_digits()
    a = {"ee": 2 * n - 2, "eo": 2 * n - 2, "oe": 2 * n - 1, "oo": 2 * n - 1}[case]
    b = {"ee": 2 * m, "eo": 2 * m - 1, "oe": 2 * m, "oo": 2 * m - 1}[case]
    with workdps(D + 15):
        f = lambda t: t**a * mpm.log((1 - t) / (1 + t)) ** b
        return +mpm.quad(f, [0, 1])


# ---------------------------------------------------------------------------
# psi-values

def psi_via_convT(k, s):
    """psi(k; s) as a combination of convoluted T-values, by parity case."""
    k = tuple(int(x) for x in k)
    s = int(s)
    if s < 2:
        raise ValueError("s must be >= 2")
    r = len(k)
    out = ClosedForm.zero()
    if r % 2 == 1:
        if s % 2 == 0:  # s = 2p
            p = s // 2
            for j in range(p):
                out = out + zetabar_cf(2 * p - 1 - 2 * j).scale(2).mul_scalar(
                    ClosedForm.sym(("Tconv", k, (1,) * (2 * j + 1)))
                )
            out = out + ClosedForm.sym(("Tconv", k, (1,) * (2 * p)))
        else:  # s = 2p+1
            p = (s - 1) // 2
            for j in range(p + 1):
                out = out + zetabar_cf(2 * p - 2 * j).scale(2).mul_scalar(
                    ClosedForm.sym(("Tconv", k, (1,) * (2 * j + 1)))
                )
    else:
        if s % 2 == 0:  # s = 2p
            p = s // 2
            for j in range(p):
                out = out + zetabar_cf(2 * p - 2 - 2 * j).scale(2).mul_scalar(
                    ClosedForm.sym(("Tconv", k, (1,) * (2 * j + 2)))
                )
        else:  # s = 2p+1
            p = (s - 1) // 2
            for j in range(p):
                out = out + zetabar_cf(2 * p - 1 - 2 * j).scale(2).mul_scalar(
                    ClosedForm.sym(("Tconv", k, (1,) * (2 * j + 2)))
                )
            out = out + ClosedForm.sym(("Tconv", k, (1,) * (2 * p + 1)))
    return out


def psi_via_mtv(k, p):
    """psi(k; p+1) as an explicit T-value combination through the dual."""
    k = tuple(int(x) for x in k)
    p = int(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    if k[-1] < 1 or not k:
        raise ValueError("bad composition")
    dual = dual_composition(plus_index(k))
    n = sum(k) + 1 - len(k)
    assert len(dual) == n
    out = ClosedForm.zero()
    for j in compositions(p, n):
        target = tuple(d + x for d, x in zip(dual, j))
        out = out + ClosedForm.sym(("T", target), b_coeff(dual, j))
    return out


# ---------------------------------------------------------------------------
# Z and Z-tilde inversion weights

def _chains(j, p):
    """All chains j = i_0 < i_1 < ... < i_k = p, yielded as tuples."""
    if j == p:
        yield (j,)
        return
    for nxt in range(j + 1, p + 1):
        for rest in _chains(nxt, p):
            yield (j,) + rest


def zed(j, p):
    """The inversion weight Z(j,p) built from zetabar(even) chain products."""
    if not 1 <= j <= p:
        raise ValueError("need 1 <= j <= p")
    if j == p:
        return ClosedForm.const(1)
    out = ClosedForm.zero()
    for chain in _chains(j, p):
        kk = len(chain) - 1
        term = ClosedForm.const(Fraction(-2) ** kk)
        for a, b in zip(chain, chain[1:]):
            term = term.mul_scalar(zetabar_cf(2 * b - 2 * a))
        out = out + term
    return out


def zed_tilde(j, p):
    """The companion weight built from zetabar(odd) chains and 1/log2 powers."""
    if not 1 <= j <= p:
        raise ValueError("need 1 <= j <= p")
    if j == p:
        return ClosedForm.const(Fraction(1, 2), ConstMonomial.log2(-1))
    out = ClosedForm.zero()
    for chain in _chains(j, p):
        kk = len(chain) - 1
        term = ClosedForm.const(
            Fraction((-1) ** kk, 2), ConstMonomial.log2(-(kk + 1))
        )
        for a, b in zip(chain, chain[1:]):
            term = term.mul_scalar(zetabar_cf(2 * b - 2 * a + 1))
        out = out + term
    return out


def zed_closed(j, p):
    """The pi-power closed form (-1)^w pi^(2w) / (2w+1)! with w = p - j."""
    w = p - j
    return ClosedForm.const(
        Fraction((-1) ** w, factorial(2 * w + 1)), ConstMonomial.pi(2 * w)
    )


# ---------------------------------------------------------------------------
# convoluted-T inversions

def convT_from_psi(k, q):
    """T(k (*) {1}_q) in psi-values, zetabar constants, and Z-weights."""
    k = tuple(int(x) for x in k)
    q = int(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    r = len(k)
    if q == 1:
        # T(k (*) (1)) is T(k_+) itself
        return ClosedForm.sym(("T", plus_index(k)))
    out = ClosedForm.zero()
    if r % 2 == 1 and q % 2 == 1:
        p = (q - 1) // 2
        for j in range(1, p + 1):
            piece = ClosedForm.sym(("psi", k, 2 * j + 1)) - zetabar_cf(
                2 * j
            ).scale(2).mul_scalar(ClosedForm.sym(("T", plus_index(k))))
            out = out + piece.mul_scalar(zed(j, p))
    elif r % 2 == 0 and q % 2 == 0:
        p = q // 2
        for j in range(1, p + 1):
            out = out + ClosedForm.sym(("psi", k, 2 * j)).mul_scalar(zed(j, p))
    elif r % 2 == 1:  # q even: invert the s = 2p case through the odd chain
        p = q // 2
        out = ClosedForm.sym(("psi", k, 2 * p))
        for j in range(p):
            out = out - zetabar_cf(2 * p - 1 - 2 * j).scale(2).mul_scalar(
                convT_from_psi(k, 2 * j + 1)
            )
    else:  # r even, q odd
        p = (q - 1) // 2
        out = ClosedForm.sym(("psi", k, 2 * p + 1))
        for j in range(p):
            out = out - zetabar_cf(2 * p - 1 - 2 * j).scale(2).mul_scalar(
                convT_from_psi(k, 2 * j + 2)
            )
    return out


# ---------------------------------------------------------------------------
# double S-values by contour integration

def msv_double_closed(p, q):
    """S(p, q) for odd weight p+q as a zeta/log2 combination.

    Implements the odd-weight contour evaluation of the scaled double sum
    and rescales to S(p,q) = 2^(2-p-q) S~(p,q).
    """
    p, q = int(p), int(q)
    if p < 1 or q < 2:
        raise ValueError("need p >= 1 and q >= 2")
    if (p + q) % 2 == 0:
        raise ValueError("only odd weight is reducible here")
    sign = Fraction((-1) ** p)
    rhs = ClosedForm.zero()
    for kk in range(p // 2 + 1):
        term = zeta_cf(2 * kk).mul_scalar(ttilde_cf(p + q - 2 * kk))
        rhs = rhs + term.scale(2 * sign * comb(p + q - 2 * kk - 1, q - 1))
    for kk in range(q):
        if (1 - (-1) ** kk) == 0:
            continue
        term = ttilde_cf(kk + 1).mul_scalar(ttilde_cf(p + q - kk - 1))
        rhs = rhs + term.scale(2 * sign * comb(p + q - kk - 2, p - 1))
    if (1 + (-1) ** q) != 0:
        term = zeta_cf(p).mul_scalar(ttilde_cf(q))
        rhs = rhs - term.scale(2 * sign)
    # rhs = (1 - (-1)^{p+q}) S~(p,q) = 2 S~(p,q)
    return rhs.scale(Fraction(1, 2)).scale(Fraction(1, 2 ** (p + q - 2)))


# ---------------------------------------------------------------------------
# triangular inversion

def invert_triangular(A, C):
    """Solve sum_{j<=p} A(j,p) B_j = C_p for B, with A(p,p) = 1.

    A is a callable A(j, p); C is the sequence (C_1, ..., C_P).  Returns the
    list (B_1, ..., B_P) via the explicit alternating-chain formula.
    """
    P = len(C)
    for p in range(1, P + 1):
        if A(p, p) != 1:
            raise ValueError("diagonal of A must be 1")
    B = []
    for p in range(1, P + 1):
        total = C[p - 1] * 1
        for j in range(1, p):
            weight = 0
            for chain in _chains(j, p):
                kk = len(chain) - 1
                prod = Fraction((-1) ** kk)
                for a, b in zip(chain, chain[1:]):
                    prod = prod * A(a, b)
                weight = weight + prod
            total = total + C[j - 1] * weight
        B.append(total)
    return B


# ---------------------------------------------------------------------------
# special harmonic sums, reduced exactly to MMVs

def hh_sum(a, q, b):
    """sum_n H^(a)_{n-1} H^(b)_{n-1} / (n - 1/2)^q as exact MMVs."""
    a, q, b = int(a), int(q), int(b)
    if a < 1 or b < 1 or q < 2:
        raise ValueError("need a, b >= 1 and q >= 2")
    c1 = Fraction(2) ** (q + a + b - 3)
    c2 = Fraction(2) ** (q + a + b - 2)
    return (
        ClosedForm.sym(("M", (a, b, q), (1, 1, -1)), c1)
        + ClosedForm.sym(("M", (b, a, q), (1, 1, -1)), c1)
        + ClosedForm.sym(("M", (a + b, q), (1, -1)), c2)
    )


def h_sum2(q):
    """sum_n H_{n-1}^2 / (n - 1/2)^q as exact MMVs."""
    return hh_sum(1, q, 1)


def th_sum(m, k):
    """sum_n T_n({1}_{2m-1}) H_n / n^(k+1) as exact MMVs (depth m = 1 only)."""
    m, k = int(m), int(k)
    if m != 1:
        raise ValueError("only the m = 1 case reduces to plain MMVs here")
    if k < 1:
        raise ValueError("k must be >= 1")
    c = Fraction(2) ** k
    return (
        ClosedForm.sym(("M", (1, 1, k + 1), (-1, 1, 1)), c)
        + ClosedForm.sym(("M", (1, 1, k + 1), (1, -1, 1)), c)
        + ClosedForm.sym(("M", (1, k + 2), (-1, 1)), 2 * c)
    )


# ---------------------------------------------------------------------------
# fixture identities

def _psi_sym(k, s):
    return ClosedForm.sym(("psi", tuple(k), int(s)))


def _conv_sym(k, l):
    return ClosedForm.sym(("Tconv", tuple(k), tuple(l)))


def _dual_sum_odd(m, p, k):
    """Both sides' common shape for the odd-s duality: sum over Z(j,p)."""
    kk = (1,) * (2 * m) + (k,)
    out = ClosedForm.zero()
    for j in range(1, p + 1):
        piece = _psi_sym(kk, 2 * j + 1) - zetabar_cf(2 * j).scale(2).mul_scalar(
            ClosedForm.sym(("T", (1,) * (2 * m) + (k + 1,)))
        )
        out = out + piece.mul_scalar(zed(j, p))
    return out


def _dual_sum_even(m, p, k):
    kk = (1,) * (2 * m - 1) + (k,)
    out = ClosedForm.zero()
    for j in range(1, p + 1):
        out = out + _psi_sym(kk, 2 * j).mul_scalar(zed(j, p))
    return out


def _dual_sum_tilde_even(m, p, k):
    kk = (1,) * (2 * m - 2) + (k,)
    out = ClosedForm.zero()
    for j in range(1, p + 1):
        piece = _psi_sym(kk, 2 * j) - _conv_sym(kk, (1,) * (2 * j))
        out = out + piece.mul_scalar(zed_tilde(j, p))
    return out


def _dual_sum_tilde_odd(m, p, k):
    kk = (1,) * (2 * m - 1) + (k,)
    out = ClosedForm.zero()
    for j in range(1, p + 1):
        piece = _psi_sym(kk, 2 * j + 1) - _conv_sym(kk, (1,) * (2 * j + 1))
        out = out + piece.mul_scalar(zed_tilde(j, p))
    return out


def _stilde(k, coeff=1):
    """S~(k) = 2^(w-r) S(k) as a ClosedForm."""
    k = tuple(k)
    return ClosedForm.sym(("S", k), Fraction(coeff) * 2 ** (sum(k) - len(k)))


def parity_triple_rhs(q):
    """Right side of the even-q evaluation of 2 sum_n H_{n-1}^2/(n-1/2)^q."""
    if q < 2 or q % 2:
        raise ValueError("even q >= 2 required")
    out = _stilde((2, q), 2) + _stilde((1, q + 1), 2 * q)
    out = out + zeta_cf(2).scale(4).mul_scalar(ttilde_cf(q))
    out = out - ttilde_cf(q + 2).scale(Fraction(q * (q + 1), 2))
    for k1 in range(q):
        if k1 % 2 == 0:
            continue
        for k2 in range(q - k1):
            k3 = q - 1 - k1 - k2
            term = ttilde_cf(k1 + 1).mul_scalar(ttilde_cf(k2 + 1))
            out = out + term.mul_scalar(ttilde_cf(k3 + 1)).scale(2)
    return out


def double_s_relation(m, p, q):
    """The symmetric double-S relation; returns (lhs, rhs) ClosedForms.

    Here zeta(1) is read as 0 and t~(1) as -2 log2.
    """
    if q < 2:
        raise ValueError("q > 1 required")
    tt = lambda n: ttilde_cf(n, one_is=-2)
    lhs = ClosedForm.zero()
    for i in range(p):
        j = p - 1 - i
        c = Fraction((-1) ** (m - 1)) * comb(m + i - 1, i) * comb(q + j - 1, j)
        lhs = lhs + _stilde((m + i, q + j), c)
    for i in range(m):
        j = m - 1 - i
        c = Fraction((-1) ** (p - 1)) * comb(p + i - 1, i) * comb(q + j - 1, j)
        lhs = lhs + _stilde((p + i, q + j), c)
    rhs = tt(p + q + m - 1).scale(comb(p + q + m - 2, q - 1))
    for i in range(p):
        j = p - 1 - i
        c = Fraction((-1) ** i) * comb(m + i - 1, i) * comb(q + j - 1, j)
        rhs = rhs + zeta_cf(m + i).mul_scalar(tt(q + j)).scale(c)
    for i in range(m):
        j = m - 1 - i
        c = Fraction((-1) ** i) * comb(p + i - 1, i) * comb(q + j - 1, j)
        rhs = rhs + zeta_cf(p + i).mul_scalar(tt(q + j)).scale(c)
    for i in range(q):
        j = q - 1 - i
        c = Fraction(comb(m + i - 1, i)) * comb(p + j - 1, j)
        rhs = rhs - tt(m + i).mul_scalar(tt(p + j)).scale(c)
    # extra boundary term whenever a digamma (rather than polygamma) factor
    # appears in the generating kernel: its constant at half-integers
    # contributes 2 t~(1) times the leading binomial t~ term
    if m == 1:
        rhs = rhs + tt(1).mul_scalar(tt(p + q - 1)).scale(2 * comb(p + q - 2, q - 1))
    if p == 1:
        rhs = rhs + tt(1).mul_scalar(tt(m + q - 1)).scale(2 * comb(m + q - 2, q - 1))
    return lhs, rhs


def fixture_identities():
    """The catalogue of identity fixtures, as (name, lhs, rhs) ClosedForms."""
    out = []
    # duality of the inversion sums, odd and even upper parameter
    out.append(("dual-odd-k2-mp12", _dual_sum_odd(1, 2, 2), _dual_sum_odd(2, 1, 2)))
    out.append(("dual-even-k2-mp12", _dual_sum_even(1, 2, 2), _dual_sum_even(2, 1, 2)))
    out.append(
        ("dual-tilde-even-k2-mp12", _dual_sum_tilde_even(1, 2, 2), _dual_sum_tilde_even(2, 1, 2))
    )
    out.append(
        ("dual-tilde-odd-k2-mp12", _dual_sum_tilde_odd(1, 2, 2), _dual_sum_tilde_odd(2, 1, 2))
    )
    # even-q parity evaluation of the squared-harmonic half-odd sum
    for q in (2, 4):
        out.append(("parity-square-q%d" % q, h_sum2(q).scale(2), parity_triple_rhs(q)))
    # triple half-odd sums against double ones
    for k in ((1, 2, 2), (2, 2, 3)):
        lhs = _stilde(k)
        rhs = zeta_cf(k[2]).mul_scalar(_stilde(k[:2])) - hh_sum(k[0], k[1], k[2])
        out.append(("triple-s-%d%d%d" % k, lhs, rhs))
    # symmetric double-S relations
    for m, p, q in ((1, 2, 2), (2, 2, 3)):
        lhs, rhs = double_s_relation(m, p, q)
        out.append(("double-s-%d%d%d" % (m, p, q), lhs, rhs))
    # S({1}_{2p-1}, 2) through T-values
    for p in (1, 2):
        lhs = ClosedForm.sym(("S", (1,) * (2 * p - 1) + (2,)))
        rhs = ClosedForm.sym(("T", (2 * p + 1,)), 2 * p)
        for j in range(p):
            rhs = rhs - zetabar_cf(2 * p - 1 - 2 * j).scale(2).mul_scalar(
                ClosedForm.sym(("T", (2 * j + 2,)))
            )
        out.append(("ones-s2-p%d" % p, lhs, rhs))
    out.append(
        (
            "ones-s2-scalar",
            ClosedForm.sym(("S", (1, 1, 1, 2))),
            ClosedForm.const(Fraction(-15, 4), ConstMonomial.log2() * ConstMonomial.zeta(4))
            + ClosedForm.const(Fraction(-9, 4), ConstMonomial.zeta(2) * ConstMonomial.zeta(3))
            + ClosedForm.const(Fraction(31, 4), ConstMonomial.zeta(5)),
        )
    )
    # depth-two alternating-zeta evaluations of S({1}_{2m}, 2) and friends
    for m in (1, 2):
        lhs = ClosedForm.sym(("S", (1,) * (2 * m) + (2,)))
        rhs = (
            ClosedForm.sym(("zeta", (1, 2 * m + 1), (1, -1)), 2)
            - ClosedForm.const(2, ConstMonomial.log2()).mul_scalar(
                ClosedForm.sym(("T", (2 * m + 1,)))
            )
            - ClosedForm.sym(("zeta", (1, 2 * m + 1), (-1, 1)), 2)
            + ClosedForm.sym(("T", (2 * m + 2,)), 2 * m + 1)
        )
        for j in range(m):
            rhs = rhs - zetabar_cf(2 * m - 1 - 2 * j).scale(2).mul_scalar(
                ClosedForm.sym(("T", (2 * j + 3,)))
            )
        out.append(("ones-s2-alt-m%d" % m, lhs, rhs))
        lhs = ClosedForm.zero()
        for j in range(m):
            lhs = lhs + zetabar_cf(2 * m - 2 - 2 * j).mul_scalar(
                ClosedForm.sym(("T", (2 * j + 3,)))
            )
        rhs = (
            ClosedForm.sym(("zeta", (1, 2 * m), (1, -1)))
            - ClosedForm.const(1, ConstMonomial.log2()).mul_scalar(
                ClosedForm.sym(("T", (2 * m,)))
            )
            - ClosedForm.sym(("zeta", (1, 2 * m), (-1, 1)))
            + ClosedForm.sym(("T", (2 * m + 1,)), m)
        )
        out.append(("zetabar-t-chain-m%d" % m, lhs, rhs))
    # mixed T/S/harmonic convolution at m = 1, k = 2
    lhs = (
        ClosedForm.const(8, ConstMonomial.log2()).mul_scalar(ClosedForm.sym(("T", (1, 3))))
        + ClosedForm.sym(("S", (1, 1, 3)), 4)
        + th_sum(1, 2)
    )
    rhs = zeta_cf(2).scale(2).mul_scalar(ClosedForm.sym(("T", (1, 2))))
    out.append(("ts-harmonic-m1k2", lhs, rhs))
    return out


# ---------------------------------------------------------------------------
# identity verification

def verify_identity(lhs, rhs, D=None):
    """Numerically compare two sides; returns (ok, residual).

    Each side may be a ClosedForm, an expression string (see the shell
    grammar), or a number.  Tolerance is 10^(8 - D).
    """
    D = D or default_digits()

    def side(x):
        if isinstance(x, ClosedForm):
            return x.numeric(D)
        if isinstance(x, str):
            from .shell import eval_expr

            return eval_expr(x, D)
        return mpm.mpf(x)

    with workdps(D + 10):
        resid = abs(side(lhs) - side(rhs))
        return bool(resid <= mpm.mpf(10) ** (8 - D)), +resid


def run_fixtures(path, D=None):
    """Run a JSONL fixture file of identities; yields result records."""
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rec = json.loads(line)
            digits = rec.get("digits") or D or default_digits()
            ok, resid = verify_identity(rec["lhs"], rec["rhs"], digits)
            yield {
                "name": rec["name"],
                "ok": ok,
                "residual": mpm.nstr(resid, 5),
                "digits": digits,
            }
