import pytest

from chevalley_iwasawa.padic import PAdic, constants_PQ
from chevalley_iwasawa.relations import (
    GeneratorPositions,
    RelationFamily,
    enumerate_relations,
    family_counts,
    opposite_roots,
    torus_conjugation,
)
from chevalley_iwasawa.root_system import Root, build_root_system, parse_cartan_type


def test_a1_counts(a1):
    counts = family_counts(enumerate_relations(a1, 5, 4))
    assert counts == {"torus_conjugation": 2, "commuting": 0, "commutator": 0, "opposite_roots": 1}


def test_a2_counts(a2):
    counts = family_counts(enumerate_relations(a2, 5, 4))
    assert counts == {"torus_conjugation": 12, "commuting": 6, "commutator": 12, "opposite_roots": 3}


@pytest.mark.parametrize("text", ["A3", "B2", "G2"])
def test_family_sizes(text):
    rs = build_root_system(parse_cartan_type(text))
    instances = enumerate_relations(rs, 7, 3)
    counts = family_counts(instances)
    assert counts["torus_conjugation"] == len(rs.roots) * rs.rank
    assert counts["opposite_roots"] == len(rs.positive_roots)
    ordered_sums = sum(1 for a in rs.roots for b in rs.roots if a != b and rs.is_root(a + b))
    assert counts["commutator"] == ordered_sums


def test_torus_conjugation_constant(a2):
    r = torus_conjugation(a2, Root((1, 0)), 2, 5, 4)
    assert r.constants["pairing"] == -1
    assert r.constants["q"] == PAdic(5, 4, 6).inverse()
    assert r.family is RelationFamily.TORUS_CONJUGATION
    assert r.name == "torus_conjugation(a1, W2)"


def test_opposite_roots_word(a2):
    r = opposite_roots(a2, Root((1, 1)), 5, 4)
    pq = constants_PQ(5, 4)
    pos = GeneratorPositions(a2)
    assert r.constants["n"] == (1, 1)
    assert [i for i, _ in r.lhs] == [pos.root[Root((1, 1))], pos.root[Root((-1, -1))]]
    assert [i for i, _ in r.rhs] == [pos.root[Root((-1, -1))], pos.torus[1], pos.torus[2], pos.root[Root((1, 1))]]
    assert [a for _, a in r.rhs] == [pq.Q, pq.P, pq.P, pq.Q]


def test_enumeration_is_deterministic(a2):
    first = [r.name for r in enumerate_relations(a2, 3, 4)]
    second = [r.name for r in enumerate_relations(a2, 3, 4)]
    assert first == second
    assert len(set(first)) == len(first)


def test_word_rendering(a1):
    r = opposite_roots(a1, Root((1,)), 5, 3)
    labels = GeneratorPositions(a1).labels
    assert r.lhs.render(labels) == "V[a1]^(1) V[-a1]^(1)"
