"""Expression language and command-line interface.

The grammar ties the library together for quick experiments:

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := rational | 'log2' | 'pi' | value | '(' expr ')'
    value  := NAME '(' args [';' int] ')'

Value names are M, T, t, S, zeta, psi, Tconv, Hsum2, THsum, HHsum.  A
leading '-' on an argument of M or zeta marks an odd-signature (resp.
alternating) entry, keeping the syntax ASCII-safe.  Tconv separates its two
compositions with '|', as in Tconv(2|1,1,1).

Commands: eval, dual, product, relations, dim, verify.  Exit codes: 2 for
syntax errors, 3 for domain errors (non-admissible arguments), 4 for
verification failures.  MMV_KIT_DIGITS sets the default precision.
"""

import argparse
import json
import os
import re
import sys
from fractions import Fraction

import mpmath as mpm

from .indexcore import Index, parse_index, index_to_word, word_to_index
from .wordalg import shuffle, stuffle_indices, dual_word
from .numeval import (default_digits, workdps, eval_index, eval_value,
                      eval_psi_series, eval_convT)


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__("syntax error at position %d: %s" % (pos, msg))
        self.pos = pos


class DomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# tokenizer and parser

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<int>\d+)"
                    r"|(?P<sym>[-+*/(),;|]))")

VALUE_NAMES = ("M", "T", "t", "S", "zeta", "psi", "Tconv",
               "Hsum2", "THsum", "HHsum")
CONST_NAMES = ("log2", "pi")


def _tokenize(src):
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == m.start():
            if src[pos:].strip():
                raise ParseError("unexpected character %r" % src[pos], pos)
            break
        if m.lastgroup == "name":
            out.append(("name", m.group("name"), m.start("name")))
        elif m.lastgroup == "int":
            out.append(("int", int(m.group("int")), m.start("int")))
        else:
            out.append(("sym", m.group("sym"), m.start("sym")))
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym):
        kind, val, pos = self.next()
        if kind != "sym" or val != sym:
            raise ParseError("expected %r" % sym, pos)

    def parse(self):
        e = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.next()
                rhs = self.term()
                e = ("add" if val == "+" else "sub", e, rhs)
            else:
                return e

    def term(self):
        e = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val == "*":
                self.next()
                e = ("mul", e, self.factor())
            else:
                return e

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "sym" and val == "-":
            self.next()
            f = self.factor()
            if f[0] != "num":
                raise ParseError("'-' may only negate a numeric literal", pos)
            return ("num", -f[1])
        if kind == "sym" and val == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if kind == "int":
            self.next()
            num = val
            k2, v2, _ = self.peek()
            if k2 == "sym" and v2 == "/":
                self.next()
                k3, v3, p3 = self.next()
                if k3 != "int":
                    raise ParseError("expected denominator", p3)
                return ("num", Fraction(num, v3))
            return ("num", Fraction(num))
        if kind == "name":
            self.next()
            k2, v2, _ = self.peek()
            if not (k2 == "sym" and v2 == "("):
                if val in CONST_NAMES:
                    return ("const", val)
                raise ParseError("unknown constant %r" % val, pos)
            if val not in VALUE_NAMES:
                raise ParseError("unknown value name %r" % val, pos)
            self.next()
            payload = self.value_args(val, pos)
            self.expect(")")
            return ("val", val, payload)
        raise ParseError("expected a factor", pos)

    def signed_int(self):
        kind, val, pos = self.next()
        sign = 1
        if kind == "sym" and val == "-":
            sign = -1
            kind, val, pos = self.next()
        if kind != "int":
            raise ParseError("expected an integer argument", pos)
        return sign * val

    def int_list(self, stop_syms):
        out = [self.signed_int()]
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val == ",":
                self.next()
                out.append(self.signed_int())
            else:
                return out

    def value_args(self, name, pos):
        first = self.int_list(")")
        kind, val, _ = self.peek()
        if name == "Tconv":
            self.expect("|")
            second = self.int_list(")")
            return (tuple(first), tuple(second))
        if kind == "sym" and val == ";":
            self.next()
            tail = self.signed_int()
            return (tuple(first), tail)
        if kind == "sym" and val == "|":
            raise ParseError("'|' is only valid inside Tconv", pos)
        return tuple(first)


def parse(src):
    """Parse an expression string into an AST."""
    return _Parser(src).parse()


def render(node):
    """Canonical text form of an AST; parse(render(e)) == e."""
    kind = node[0]
    if kind == "num":
        q = node[1]
        return str(q.numerator) if q.denominator == 1 else \
            "%d/%d" % (q.numerator, q.denominator)
    if kind == "const":
        return node[1]
    if kind == "val":
        name, payload = node[1], node[2]
        if name == "Tconv":
            return "Tconv(%s|%s)" % (",".join(map(str, payload[0])),
                                     ",".join(map(str, payload[1])))
        if isinstance(payload, tuple) and len(payload) == 2 \
                and isinstance(payload[0], tuple):
            return "%s(%s;%d)" % (name, ",".join(map(str, payload[0])),
                                  payload[1])
        return "%s(%s)" % (name, ",".join(map(str, payload)))
    if kind in ("add", "sub"):
        op = " + " if kind == "add" else " - "
        lhs = render(node[1])
        rhs = render(node[2])
        if node[2][0] in ("add", "sub"):
            rhs = "(%s)" % rhs
        return lhs + op + rhs
    if kind == "mul":
        parts = []
        for pos, child in enumerate((node[1], node[2])):
            s = render(child)
            # '*' is left-associative, so a mul in the right slot needs parens
            if child[0] in ("add", "sub") or (pos == 1 and child[0] == "mul"):
                s = "(%s)" % s
            parts.append(s)
        return "*".join(parts)
    raise ValueError("bad AST node %r" % (node,))


# ---------------------------------------------------------------------------
# evaluation

def _positive_composition(args, name):
    if any(a < 1 for a in args):
        raise DomainError("%s takes a composition of positive integers" % name)
    return tuple(args)


def _eval_value_node(name, payload, D):
    try:
        if name == "M":
            idx = parse_index(payload)
            return eval_index(idx, D)
        if name in ("T", "t", "S"):
            return eval_value(name, _positive_composition(payload, name),
                              None, D)
        if name == "zeta":
            ks = tuple(abs(a) for a in payload)
            signs = tuple(-1 if a < 0 else 1 for a in payload)
            return eval_value("zeta", ks, signs, D)
        if name == "psi":
            if not (isinstance(payload, tuple) and len(payload) == 2
                    and isinstance(payload[0], tuple)):
                raise DomainError("psi needs psi(k1,...,kr;s)")
            k, s = payload
            if s < 1:
                raise DomainError("psi needs s >= 1")
            return eval_psi_series(_positive_composition(k, "psi"), s, D)
        if name == "Tconv":
            kpart, lpart = payload
            return eval_convT(_positive_composition(kpart, "Tconv"),
                              _positive_composition(lpart, "Tconv"), D)
        from . import closedforms
        if name == "Hsum2":
            (q,) = payload
            return closedforms.h_sum2(q).numeric(D)
        if name == "THsum":
            if not (isinstance(payload, tuple) and len(payload) == 2
                    and isinstance(payload[0], tuple)):
                raise DomainError("THsum needs THsum(m;k)")
            (m,), k = payload
            return closedforms.th_sum(m, k).numeric(D)
        if name == "HHsum":
            if not (isinstance(payload, tuple) and len(payload) == 2
                    and isinstance(payload[0], tuple)):
                raise DomainError("HHsum needs HHsum(a,b;q)")
            (a, b), q = payload
            return closedforms.hh_sum(a, q, b).numeric(D)
    except DomainError:
        raise
    except (ValueError, TypeError) as exc:
        raise DomainError(str(exc))
    raise DomainError("unknown value name %r" % name)


def eval_ast(node, D):
    kind = node[0]
    if kind == "num":
        q = node[1]
        return mpm.mpf(q.numerator) / q.denominator
    if kind == "const":
        return mpm.log(2) if node[1] == "log2" else +mpm.pi
    if kind == "val":
        return _eval_value_node(node[1], node[2], D)
    a = eval_ast(node[1], D)
    b = eval_ast(node[2], D)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return a * b


def eval_expr(src, D=None):
    """Parse and numerically evaluate an expression string."""
    D = D or default_digits()
    ast = parse(src)
    with workdps(D + 10):
        return +eval_ast(ast, D)


def format_digits(x, D):
    """Truncate (not round) to D significant digits, annotated with +-1ulp."""
    with workdps(D + 15):
        x = mpm.mpf(x)
        if x == 0:
            return "0." + "0" * (D - 1) + " (+-1ulp)"
        s = mpm.nstr(x, D + 8, strip_zeros=False)
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if "e" in s:
        mant, exp = s.split("e")
    else:
        mant, exp = s, ""
    digits = mant.replace(".", "")
    lead = len(digits) - len(digits.lstrip("0"))
    point = mant.index(".") if "." in mant else len(mant)
    kept = 0
    out = []
    for i, ch in enumerate(mant):
        if ch == ".":
            out.append(ch)
            continue
        out.append(ch)
        if not (kept == 0 and ch == "0"):
            kept += 1
        if kept == D and i >= point:
            break
    text = "".join(out)
    if exp:
        text += "e" + exp
    return ("-" if neg else "") + text + " (+-1ulp)"


# ---------------------------------------------------------------------------
# commands

def _index_arg(src):
    ast = parse(src)
    if ast[0] != "val" or ast[1] != "M":
        raise DomainError("expected a single M(...) value")
    return parse_index(ast[2])


def _lincomb_str(terms):
    """Render {Index: Fraction} deterministically."""
    parts = []
    for idx in sorted(terms):
        c = terms[idx]
        if c == 0:
            continue
        mag = abs(c)
        coeff = "" if mag == 1 else (
            str(mag.numerator) if mag.denominator == 1
            else "%d/%d" % (mag.numerator, mag.denominator)) + "*"
        piece = coeff + repr(idx)
        if not parts:
            parts.append(("-" if c < 0 else "") + piece)
        else:
            parts.append(("- " if c < 0 else "+ ") + piece)
    return " ".join(parts) if parts else "0"


def run(argv=None):
    ap = argparse.ArgumentParser(
        prog="mmvkit",
        description="evaluate and relate multiple mixed values")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("eval", help="evaluate an expression numerically")
    p.add_argument("expr")
    p.add_argument("--digits", type=int, default=None)
    p = sub.add_parser("dual", help="print the duality expansion of a value")
    p.add_argument("value")
    p = sub.add_parser("product", help="expand a product of two values")
    p.add_argument("--mode", choices=["sha", "st"], required=True)
    p.add_argument("v1")
    p.add_argument("v2")
    p = sub.add_parser("relations", help="harvest weight-w relations as JSON")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--out", default=None)
    p = sub.add_parser("dim", help="dimension upper bound report as JSON")
    p.add_argument("--weight", type=int, required=True)
    p = sub.add_parser("verify", help="run a JSONL identity fixture file")
    p.add_argument("fixtures")
    p.add_argument("--digits", type=int, default=None)
    args = ap.parse_args(argv)

    env = os.environ.get("MMV_KIT_DIGITS")
    digits = getattr(args, "digits", None) or (int(env) if env else None) \
        or default_digits()

    try:
        if args.cmd == "eval":
            val = eval_expr(args.expr, digits)
            print(format_digits(val, digits))
            return 0
        if args.cmd == "dual":
            idx = _index_arg(args.value)
            try:
                lc = dual_word(index_to_word(idx))
            except ValueError as exc:
                raise DomainError(str(exc))
            terms = {}
            for ww, c in lc:
                terms[word_to_index(ww)] = terms.get(word_to_index(ww),
                                                     Fraction(0)) + Fraction(c)
            print("%r = %s" % (idx, _lincomb_str(terms)))
            return 0
        if args.cmd == "product":
            a = _index_arg(args.v1)
            b = _index_arg(args.v2)
            terms = {}
            if args.mode == "sha":
                for ww, c in shuffle(index_to_word(a), index_to_word(b)):
                    idx = word_to_index(ww)
                    terms[idx] = terms.get(idx, Fraction(0)) + Fraction(c)
            else:
                for idx, c in stuffle_indices(a, b):
                    terms[idx] = terms.get(idx, Fraction(0)) + Fraction(c)
            print("%r * %r = %s" % (a, b, _lincomb_str(terms)))
            return 0
        if args.cmd in ("relations", "dim"):
            from .linrel import RelationKit, rational_rank
            if args.weight < 2:
                raise DomainError("weight must be >= 2")
            kit = RelationKit()
            rels = kit.harvest(args.weight)
            text = rels.to_json()
            if args.cmd == "relations" and args.out:
                with open(args.out, "w") as fh:
                    fh.write(text + "\n")
            else:
                print(text)
            return 0
        if args.cmd == "verify":
            from .closedforms import run_fixtures
            bad = 0
            for rec in run_fixtures(args.fixtures, digits):
                status = "pass" if rec["ok"] else "FAIL"
                print("%s %s residual=%s digits=%d"
                      % (status, rec["name"], rec["residual"], rec["digits"]))
                if not rec["ok"]:
                    bad += 1
            if bad:
                print("%d identit%s failed" % (bad, "y" if bad == 1 else "ies"))
                return 4
            return 0
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
