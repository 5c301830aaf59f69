from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from mmvkit.indexcore import index_to_word, parse_index
from mmvkit.wordalg import (
    EMPTY,
    LinComb,
    Word,
    dual_word,
    shuffle,
    stuffle,
    stuffle_indices,
    zblock,
)

words = st.text(alphabet="0+-", max_size=4).map(Word)
a1_words = st.text(alphabet="0+-", max_size=4).filter(
    lambda s: not s.endswith("0")
).map(Word)


def test_word_basics():
    w = Word("0+-")
    assert w.weight == 3 and w.depth == 2
    assert w.is_admissible() and w.in_a1()
    assert not Word("+0").in_a1()
    assert Word("").in_a1() and not Word("").is_admissible()
    assert (Word("0-") + Word("+")).s == "0-+"
    with pytest.raises(ValueError):
        Word("0x")


def test_blocks_round_trip():
    w = Word("0-+00-")
    assert w.blocks() == [(2, -1), (1, 1), (3, -1)]
    assert Word.from_blocks(w.blocks()) == w
    with pytest.raises(ValueError):
        Word("0").blocks()
    assert zblock(3, -1) == Word("00-")
    with pytest.raises(ValueError):
        zblock(0, 1)


def test_lincomb_arithmetic():
    a = LinComb.of(Word("0-"), 2)
    b = LinComb.of(Word("0+"), -1)
    c = a + b - a.scale(Fraction(1, 2))
    assert c.coeff(Word("0-")) == 1
    assert c.coeff(Word("0+")) == -1
    assert len(a - a) == 0
    assert (a - a) == LinComb.zero()


@settings(max_examples=60)
@given(words, words)
def test_shuffle_commutes_and_counts(u, v):
    p = shuffle(u, v)
    assert p == shuffle(v, u)
    assert sum(c for _, c in p) == comb(len(u) + len(v), len(u))
    assert all(len(w) == len(u) + len(v) for w, _ in p)


@settings(max_examples=25, deadline=None)
@given(words, words, words)
def test_shuffle_associates(u, v, w):
    assert shuffle(shuffle(u, v), w) == shuffle(u, shuffle(v, w))


@settings(max_examples=60)
@given(a1_words, a1_words)
def test_stuffle_commutes(u, v):
    p = stuffle(u, v)
    assert p == stuffle(v, u)
    assert all(len(w) == len(u) + len(v) for w, _ in p)


@settings(max_examples=20, deadline=None)
@given(a1_words, a1_words, a1_words)
def test_stuffle_associates(u, v, w):
    assert stuffle(stuffle(u, v), w) == stuffle(u, stuffle(v, w))


def test_stuffle_rejects_words_outside_a1():
    with pytest.raises(ValueError):
        stuffle(Word("+0"), Word("-"))


def test_stuffle_merge_needs_equal_signs():
    # conflicting slot signs: interleavings only, no merged term
    p = stuffle_indices(parse_index([2]), parse_index([-2]))
    assert p.terms == {
        parse_index([2, -2]): Fraction(1),
        parse_index([-2, 2]): Fraction(1),
    }
    # equal signs: merged term carries the factor 2
    p = stuffle_indices(parse_index([2]), parse_index([2]))
    assert p.terms == {
        parse_index([2, 2]): Fraction(2),
        parse_index([4]): Fraction(2),
    }


def test_stuffle_indices_requires_admissible():
    with pytest.raises(ValueError):
        stuffle_indices(parse_index([1]), parse_index([2]))


def test_dual_word_involution_and_domain():
    for src in ([-2], [-3], [-1, 2], [-1, -2], [-2, -2], [-1, 1, 2]):
        w = index_to_word(parse_index(src))
        image = dual_word(w)
        assert dual_word(image) == LinComb.of(w)
    with pytest.raises(ValueError):
        dual_word(index_to_word(parse_index([2])))  # even signature
    with pytest.raises(ValueError):
        dual_word(Word("+-"))  # not admissible
