"""Evaluate a few parity-constrained nested sums at high precision.

Run with:  python3 demos/evaluate_values.py
"""

import mpmath as mpm

from mmvkit import eval_expr, parse_index
from mmvkit.numeval import eval_index, workdps

DIGITS = 40

print("Values at %d digits" % DIGITS)
print("-" * 60)
for src in ["M(-2)", "M(2)", "M(1,-2)", "M(-1,1,2)", "T(3)", "t(2)",
            "S(3,2)", "psi(1;2)", "Tconv(2|1,1,1)"]:
    with workdps(DIGITS + 5):
        print("%-16s = %s" % (src, mpm.nstr(eval_expr(src, DIGITS), DIGITS)))

print()
print("Some classical anchors")
print("-" * 60)
with workdps(DIGITS + 5):
    m2 = eval_index(parse_index([-2]), DIGITS)
    print("M(-2) - pi^2/4          =", mpm.nstr(m2 - mpm.pi**2 / 4, 5))
    w3 = eval_expr("2*M(-1,2) - 7/2*zeta(3)", DIGITS)
    print("2 M(-1,2) - 7/2 zeta(3) =", mpm.nstr(w3, 5))
    psi = eval_expr("psi(1;2) - 2*T(3)", DIGITS)
    print("psi(1;2) - 2 T(3)       =", mpm.nstr(psi, 5))
