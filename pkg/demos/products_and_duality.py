"""Shuffle and stuffle products, and the odd-signature duality.

Run with:  python3 demos/products_and_duality.py
"""

import mpmath as mpm

from mmvkit import dual_word, parse_index, shuffle, stuffle_indices
from mmvkit.indexcore import index_to_word, word_to_index
from mmvkit.numeval import eval_index, eval_lincomb, eval_word, workdps

a = parse_index([2, 1, -3])
b = parse_index([-2])
print("series product %r * %r:" % (a, b))
for idx, c in sorted(stuffle_indices(a, b), key=lambda t: repr(t[0])):
    print("   %s * %r" % (c, idx))

u, v = index_to_word(parse_index([2])), index_to_word(parse_index([-2]))
print()
print("integral product M(2) * M(-2), as words %r sha %r:" % (u, v))
for w, c in shuffle(u, v):
    print("   %s * %r  (= %r)" % (c, w, word_to_index(w)))

print()
idx = parse_index([-1, 1, 2])
word = index_to_word(idx)
image = dual_word(word)
print("duality of %r (word %r):" % (idx, word))
for w, c in image:
    print("   %s * %r" % (c, word_to_index(w)))
with workdps(45):
    resid = eval_word(word, 40) - eval_lincomb(image, 40)
    print("numeric residual:", mpm.nstr(abs(resid), 5))

print()
print("homomorphism check for the series product:")
with workdps(45):
    lhs = eval_index(a, 40) * eval_index(b, 40)
    rhs = mpm.mpf(0)
    for idx2, c in stuffle_indices(a, b):
        rhs += mpm.mpf(c.numerator) / c.denominator * eval_index(idx2, 40)
    print("|M(2,1,-3) M(-2) - expansion| =", mpm.nstr(abs(lhs - rhs), 5))
