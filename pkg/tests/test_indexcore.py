from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mmvkit.indexcore import (
    AltIndex,
    Index,
    alternating_to_mmv,
    dual_composition,
    formal_index,
    index_to_word,
    index_to_word_st,
    mmv_to_alternating,
    parse_index,
    plus_index,
    q_inverse,
    q_transform,
    word_to_index,
    word_to_index_st,
)
from mmvkit.linrel import generators

signatures = st.lists(st.sampled_from([1, -1]), min_size=1, max_size=6)
indices = st.builds(
    lambda ks, es: Index(ks, es[: len(ks)]),
    st.lists(st.integers(1, 4), min_size=1, max_size=4),
    st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4),
)


def test_index_validation():
    with pytest.raises(ValueError):
        Index((), ())
    with pytest.raises(ValueError):
        Index((0, 2), (1, 1))
    with pytest.raises(ValueError):
        Index((1, 2), (1, 2))
    with pytest.raises(ValueError):
        parse_index([1, 0])


def test_index_basics():
    idx = parse_index([1, -2])
    assert idx.weight == 3 and idx.depth == 2
    assert idx.k == (1, 2) and idx.eps == (1, -1)
    assert repr(idx) == "M(1,-2)"
    assert idx.is_admissible()
    assert not parse_index([2, 1]).is_admissible()


@given(signatures)
def test_q_transform_inverse(eps):
    eps = tuple(eps)
    assert q_inverse(q_transform(eps)) == eps
    assert q_transform(q_inverse(eps)) == eps


def test_word_round_trip_over_generators():
    for w in range(2, 6):
        for g in generators(w):
            word = index_to_word(g)
            assert word.is_admissible()
            assert word.weight == g.weight
            assert word.depth == g.depth
            assert word_to_index(word) == g


@given(indices)
def test_series_word_round_trip(idx):
    word = index_to_word_st(idx)
    assert word_to_index_st(word) == idx


def test_formal_index_extends_word_to_index():
    for w in range(2, 5):
        for g in generators(w):
            assert formal_index(index_to_word(g)) == g


def test_dual_composition_involution():
    comps = [(2,), (3,), (1, 2), (2, 2), (1, 1, 2), (1, 3), (2, 1, 2)]
    for k in comps:
        d = dual_composition(k)
        assert sum(d) == sum(k)
        assert dual_composition(d) == k
    assert dual_composition((2,)) == (2,)
    assert dual_composition((1, 2)) == (3,)
    with pytest.raises(ValueError):
        dual_composition((2, 1))


def test_plus_index():
    assert plus_index((1, 2)) == (1, 3)
    with pytest.raises(ValueError):
        plus_index(())


@given(indices.filter(lambda i: i.is_admissible()))
def test_alternating_round_trip(idx):
    expansion = mmv_to_alternating(idx)
    back = {}
    for alt, c in expansion.items():
        for i, cc in alternating_to_mmv(alt).items():
            back[i] = back.get(i, Fraction(0)) + c * cc
    back = {i: c for i, c in back.items() if c}
    assert back == {idx: Fraction(1)}


def test_alt_index_repr_and_admissibility():
    alt = AltIndex((1, 2), (-1, 1))
    assert repr(alt) == "zeta(-1,2)"
    assert alt.is_admissible()
    assert not AltIndex((1,), (1,)).is_admissible()
    assert AltIndex((1,), (-1,)).is_admissible()
