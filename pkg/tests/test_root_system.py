import pytest

from chevalley_iwasawa.errors import InvalidCartanTypeError, NotARootError
from chevalley_iwasawa.root_system import (
    CartanType,
    GeneratorKind,
    Root,
    build_root_system,
    generator_order,
    parse_cartan_type,
)


@pytest.mark.parametrize(
    "text, count",
    [("A1", 2), ("A2", 6), ("A3", 12), ("B2", 8), ("B3", 18), ("C3", 18), ("D4", 24), ("G2", 12), ("F4", 48), ("E6", 72)],
)
def test_root_counts(text, count):
    rs = build_root_system(parse_cartan_type(text))
    assert len(rs.roots) == count
    assert len(rs.positive_roots) == count // 2
    assert len(generator_order(rs)) == count + rs.rank


def test_parse_cartan_type():
    assert parse_cartan_type("g2") == CartanType("G", 2)
    assert str(parse_cartan_type(" A3 ")) == "A3"


@pytest.mark.parametrize("text", ["A0", "E9", "X3", "D3", "F5", "G", "B1"])
def test_invalid_cartan_types(text):
    with pytest.raises(InvalidCartanTypeError):
        parse_cartan_type(text)


def test_a2_root_order(a2):
    assert [str(r) for r in a2.roots] == ["-a1-a2", "-a1", "-a2", "a1", "a2", "a1+a2"]
    assert a2.highest_root == Root((1, 1))
    assert a2.cartan_matrix == ((2, -1), (-1, 2))


def test_a2_generator_order(a2):
    labels = generator_order(a2)
    assert [label.name for label in labels] == [
        "V[-a1-a2]",
        "V[-a1]",
        "V[-a2]",
        "W1",
        "W2",
        "V[a1]",
        "V[a2]",
        "V[a1+a2]",
    ]
    assert [label.position for label in labels] == list(range(8))
    assert labels[3].kind is GeneratorKind.TORUS
    assert labels[3].simple_index == 1


def test_g2_roots(g2):
    positive = {r.coeffs for r in g2.positive_roots}
    assert positive == {(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)}
    assert g2.highest_root == Root((3, 2))
    assert g2.cartan_matrix == ((2, -1), (-3, 2))
    assert g2.squared_length(Root((1, 0))) == 2
    assert g2.squared_length(Root((0, 1))) == 6


def test_root_strings_and_pairing(g2):
    a1, a2 = Root((1, 0)), Root((0, 1))
    assert g2.root_string(a2, a1) == (3, 0)
    assert g2.pairing(a2, a1) == -3
    assert g2.pairing(a1, a2) == -1
    assert g2.pairing(a1, a1) == 2
    assert g2.pairing(a1, -a1) == -2
    with pytest.raises(NotARootError):
        g2.root_string(a1, -a1)


def test_reflections(a2):
    a1, a2_ = Root((1, 0)), Root((0, 1))
    assert a2.reflect(a1, 1) == -a1
    assert a2.reflect(a2_, 1) == Root((1, 1))
    for gamma in a2.roots:
        assert a2.reflect(a2.reflect(gamma, 2), 2) == gamma


def test_require_root(a2):
    with pytest.raises(NotARootError):
        a2.require_root(Root((2, 0)))
    with pytest.raises(NotARootError):
        a2.require_root(Root((1, 0, 0)))


def test_root_arithmetic():
    gamma = 2 * Root((1, 0)) + Root((0, 1))
    assert gamma == Root((2, 1))
    assert str(gamma) == "2a1+a2"
    assert str(-gamma) == "-2a1-a2"
    assert gamma.height == 3
    assert Root.simple(2, 3) == Root((0, 1, 0))


def test_build_is_cached():
    assert build_root_system(CartanType("B", 3)) is build_root_system(parse_cartan_type("B3"))
