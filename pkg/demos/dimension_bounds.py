"""Harvest linear relations and bound the dimension of each weight space.

Builds the relation matrix from integral/series double-shuffle pairs, the
regularized comparisons, duality, and distribution rows, then reports the
corank against the Fibonacci-type reference values.

Run with:  python3 demos/dimension_bounds.py [max_weight]
The weight-6 harvest takes about a minute; the default stops at 5.
"""

import sys

from mmvkit.linrel import RelationKit

max_w = int(sys.argv[1]) if len(sys.argv) > 1 else 5

kit = RelationKit()
print("weight  generators  rows  rank  bound  reference")
for w in range(2, max_w + 1):
    rep = kit.report(w)
    print("%6d  %10d  %4d  %4d  %5d  %9s"
          % (w, rep["generators"], rep["rows"], rep["rank"], rep["bound"],
             rep["table1"]))

print()
print("sample relation basis at weight 4:")
for row in kit._relation_basis(4)[:5]:
    parts = []
    for idx in sorted(row, key=repr):
        parts.append("%s*%r" % (row[idx], idx))
    print("   0 =", " + ".join(parts))
