import json
from fractions import Fraction

import pytest

from mmvkit.indexcore import parse_index
from mmvkit.linrel import (
    TABLE1,
    RelationKit,
    RelationSet,
    express,
    fibonacci_bound,
    generators,
    rational_rank,
)

I = parse_index


def test_fibonacci_bound_matches_reference_table():
    assert all(fibonacci_bound(w) == TABLE1[w] for w in range(2, len(TABLE1)))


def test_generators_enumeration():
    assert set(generators(2)) == {I([2]), I([-2])}
    # count: sum over admissible compositions of 2^depth
    assert [len(generators(w)) for w in range(2, 7)] == [2, 6, 18, 54, 162]
    for w in range(2, 6):
        gens = generators(w)
        assert len(set(gens)) == len(gens)
        assert all(g.weight == w and g.is_admissible() for g in gens)


def test_rational_rank_small_cases():
    rows = [
        {0: Fraction(1), 1: Fraction(2)},
        {0: Fraction(2), 1: Fraction(4)},
        {2: Fraction(1)},
    ]
    assert rational_rank(rows) == 2
    assert rational_rank(rows, order="colwise") == 2
    assert rational_rank([]) == 0


def test_relation_set_columns_and_json():
    rs = RelationSet(3, generators(3))
    a, b = I([-1, 2]), I([1, -2])
    rs.add({rs.column(a): Fraction(2), rs.column(b): Fraction(-1)}, "DBSF")
    ext = rs.column(("log2", I([-2])))
    assert ext == len(rs.generators)
    rs.add({ext: Fraction(1)}, "regDBSF", tdegree=1)
    doc = json.loads(rs.to_json())
    assert doc["weight"] == 3
    assert len(doc["relations"]) == 2
    assert doc["relations"][0]["source"] == "DBSF"
    assert doc["relations"][1]["tdegree"] == 1
    assert "log2*M(-2)" in doc["generators"]
    assert doc["fibonacci_bound"] == 2 and doc["table1"] == 2


def test_low_weight_bounds_are_sharp():
    kit = RelationKit()
    assert kit.dim_upper_bound(2) == 1
    assert kit.dim_upper_bound(3) == 2


def test_log2_table_weight_three():
    kit = RelationKit()
    table = kit.log2_table(3)
    # every weight-2 value has a derivable log2 product at weight 3
    assert set(table) == {I([2]), I([-2])}
    for expr in table.values():
        assert all(i.weight == 3 for i in expr)


def test_express_recovers_basis_elements():
    kit = RelationKit()
    rels = kit.harvest(3)
    basis = [I([1, -2]), I([-1, -2])]
    for b in basis:
        combo = express({b: Fraction(1)}, basis, rels)
        combo = {i: c for i, c in combo.items() if c}
        assert combo == {b: Fraction(1)}
    with pytest.raises(ValueError):
        express({I([2]): Fraction(1)}, basis, rels)  # weight mismatch


def test_harvest_sources_are_labeled():
    kit = RelationKit()
    rels = kit.harvest(4)
    assert rels.rows
    assert set(rels.sources) <= {"DBSF", "duality", "regDBSF", "distribution"}
    assert "duality" in rels.sources
    assert "regDBSF" in rels.sources
