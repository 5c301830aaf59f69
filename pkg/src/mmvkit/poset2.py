r"""Labeled 2-posets and their associated integrals.

A 2-poset is a finite partially ordered set whose elements carry labels 0 or
1.  It is admissible when every maximal element is labeled 0 and every
minimal element is labeled 1.  To such a poset one attaches an iterated
integral over the order polytope; totally ordered (chain) posets reproduce
word integrals, with the maximal element corresponding to the leftmost
(outermost) letter.  Here every label-1 element contributes the form
2dt/(1-t^2), so chains evaluate to odd-signature word integrals.

The fundamental expansion I(X) = I(X with a < b) + I(X with b < a), applied
to any incomparable pair a, b, reduces every admissible 2-poset to a linear
combination of chains, i.e. of admissible words.  The number of chain terms
equals the number of linear extensions of the poset.
"""

import json
from fractions import Fraction
from functools import lru_cache

from .wordalg import Word, LinComb


class Poset2:
    """A labeled poset on elements 0..n-1.

    edges is a set of (a, b) pairs meaning a < b; the stored relation is the
    full transitive closure.  labels[i] is 0 or 1.
    """

    __slots__ = ("n", "labels", "below")

    def __init__(self, n, edges, labels):
        self.n = int(n)
        self.labels = tuple(int(x) for x in labels)
        if len(self.labels) != self.n:
            raise ValueError("need one label per element")
        if any(x not in (0, 1) for x in self.labels):
            raise ValueError("labels must be 0 or 1")
        # transitive closure as a tuple of frozensets: below[b] = {a : a < b}
        below = [set() for _ in range(self.n)]
        edges = list(edges)
        changed = True
        for a, b in edges:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError("edge out of range")
            below[b].add(a)
        while changed:
            changed = False
            for b in range(self.n):
                extra = set()
                for a in below[b]:
                    extra |= below[a]
                if not extra <= below[b]:
                    below[b] |= extra
                    changed = True
        for b in range(self.n):
            if b in below[b]:
                raise ValueError("relation has a cycle")
        self.below = tuple(frozenset(s) for s in below)

    def less(self, a, b):
        return a in self.below[b]

    def comparable(self, a, b):
        return a == b or self.less(a, b) or self.less(b, a)

    def maximal(self):
        return [a for a in range(self.n)
                if not any(self.less(a, b) for b in range(self.n))]

    def minimal(self):
        return [a for a in range(self.n) if not self.below[a]]

    def is_admissible(self):
        if self.n == 0:
            return True
        return (all(self.labels[a] == 0 for a in self.maximal())
                and all(self.labels[a] == 1 for a in self.minimal()))

    def is_chain(self):
        return all(self.comparable(a, b)
                   for a in range(self.n) for b in range(a + 1, self.n))

    def chain_word(self):
        """The word of a chain poset: maximal element = leftmost letter.

        Label 0 becomes the letter 0 and label 1 becomes the letter -.
        """
        if not self.is_chain():
            raise ValueError("not a chain")
        order = sorted(range(self.n), key=lambda a: len(self.below[a]),
                       reverse=True)
        return Word("".join("0" if self.labels[a] == 0 else "-"
                            for a in order))

    def with_edge(self, a, b):
        edges = [(x, y) for y in range(self.n) for x in self.below[y]]
        edges.append((a, b))
        return Poset2(self.n, edges, self.labels)

    def canonical(self):
        """A relabeling-invariant hashable form, for memoization."""
        # iterative refinement by (label, in/out degree profiles)
        color = {a: (self.labels[a],) for a in range(self.n)}
        for _ in range(self.n):
            new = {}
            for a in range(self.n):
                dn = sorted(color[x] for x in self.below[a])
                up = sorted(color[x] for x in range(self.n)
                            if a in self.below[x])
                new[a] = (color[a], tuple(dn), tuple(up))
            # compress
            vals = sorted(set(new.values()))
            rank = {v: i for i, v in enumerate(vals)}
            nxt = {a: (rank[new[a]],) for a in range(self.n)}
            if nxt == color:
                break
            color = nxt
        order = sorted(range(self.n), key=lambda a: (color[a], sorted(
            color[x] for x in self.below[a]), a))
        pos = {a: i for i, a in enumerate(order)}
        rel = frozenset((pos[x], pos[b]) for b in range(self.n)
                        for x in self.below[b])
        labs = tuple(self.labels[a] for a in order)
        return (self.n, labs, rel)

    def to_json(self):
        edges = sorted((a, b) for b in range(self.n) for a in self.below[b])
        return json.dumps({"n": self.n, "edges": edges,
                           "labels": list(self.labels)})

    @staticmethod
    def from_json(s):
        d = json.loads(s)
        return Poset2(d["n"], [tuple(e) for e in d["edges"]], d["labels"])

    def __repr__(self):
        return "Poset2(n=%d, labels=%s)" % (self.n, list(self.labels))


def chain_poset(k):
    """The chain whose integral is 2^r T(k) for an admissible composition k.

    Elements run bottom (innermost, label 1) to top; each entry k_i of the
    composition contributes one label-1 element followed by k_i - 1 label-0
    elements above it.
    """
    k = tuple(int(x) for x in k)
    if not k or k[-1] < 2:
        raise ValueError("composition is not admissible")
    labels = []
    for ki in k:
        labels.append(1)
        labels.extend([0] * (ki - 1))
    n = len(labels)
    edges = [(i, i + 1) for i in range(n - 1)]
    return Poset2(n, edges, labels)


def psi_poset(k, s):
    """The 2-poset whose integral is psi(k; s) for s >= 1.

    Built from the chain of k (any composition, k need not be admissible)
    with one extra label-0 apex above the chain's top, and a chain of s - 1
    label-1 elements attached below the apex on a separate branch.
    """
    k = tuple(int(x) for x in k)
    if not k or any(x < 1 for x in k):
        raise ValueError("bad composition")
    s = int(s)
    if s < 1:
        raise ValueError("s must be >= 1")
    labels = []
    for ki in k:
        labels.append(1)
        labels.extend([0] * (ki - 1))
    n = len(labels)
    edges = [(i, i + 1) for i in range(n - 1)]
    apex = n
    labels.append(0)
    edges.append((n - 1, apex))
    prev = apex
    for _ in range(s - 1):
        labels.append(1)
        edges.append((len(labels) - 1, prev))
        prev = len(labels) - 1
    return Poset2(len(labels), edges, labels)


def conv_poset(k, l1, l2):
    """The 2-poset of the integral part of T(k (*) (l1, l2)).

    Main chain: the chain of k with l2 extra label-0 elements on top; a side
    chain of one label-1 element with l1 - 1 label-0 elements above it, whose
    bottom (label-1) element sits below the main chain's top element.  The
    associated integral equals T(k (*) (l1, l2)) plus
    2*zetabar(l1)*T(k_1,...,k_{m-1},k_m+l2) when depth(k) is odd, and equals
    it exactly when depth(k) is even.
    """
    k = tuple(int(x) for x in k)
    if not k or any(x < 1 for x in k):
        raise ValueError("bad composition")
    l1, l2 = int(l1), int(l2)
    if l1 < 1 or l2 < 1:
        raise ValueError("l1 and l2 must be positive")
    labels = []
    for ki in k:
        labels.append(1)
        labels.extend([0] * (ki - 1))
    labels.extend([0] * l2)
    n = len(labels)
    edges = [(i, i + 1) for i in range(n - 1)]
    # side chain: label-1 bottom plus l1 - 1 label-0 above it; only the
    # bottom element is tied below the main chain's top
    base = len(labels)
    labels.append(1)
    for _ in range(l1 - 1):
        labels.append(0)
    for i in range(base, len(labels) - 1):
        edges.append((i, i + 1))
    edges.append((base, n - 1))
    return Poset2(len(labels), edges, labels)


_EXPAND_MEMO = {}


def expand(X):
    """Expand an admissible 2-poset into a LinComb of admissible words.

    Repeatedly applies I(X) = I(X + a<b) + I(X + b<a) to the lexicographically
    smallest incomparable pair.  Results are memoized under a canonical form,
    so isomorphic posets are expanded once.
    """
    if not isinstance(X, Poset2):
        raise TypeError("expected a Poset2")
    if X.n == 0:
        return LinComb.of(Word(""))
    key = X.canonical()
    got = _EXPAND_MEMO.get(key)
    if got is not None:
        return got
    pair = None
    for a in range(X.n):
        for b in range(a + 1, X.n):
            if not X.comparable(a, b):
                pair = (a, b)
                break
        if pair:
            break
    if pair is None:
        out = LinComb.of(X.chain_word())
    else:
        a, b = pair
        out = expand(X.with_edge(a, b)) + expand(X.with_edge(b, a))
    _EXPAND_MEMO[key] = out
    return out


def linear_extension_count(X):
    """Number of linear extensions, counted directly on the relation."""
    full = frozenset(range(X.n))

    @lru_cache(maxsize=None)
    def rec(remaining):
        if not remaining:
            return 1
        total = 0
        for a in remaining:
            # a can come first among remaining iff nothing below it remains
            if not (X.below[a] & remaining):
                total += rec(remaining - {a})
        return total

    return rec(full)


def poset_value(X, D=50):
    """Numeric value of the integral of an admissible 2-poset."""
    from .numeval import eval_lincomb

    if not X.is_admissible():
        raise ValueError("poset is not admissible")
    return eval_lincomb(expand(X), D)
