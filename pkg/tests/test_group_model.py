import dataclasses

import pytest

from chevalley_iwasawa import relations
from chevalley_iwasawa.chevalley_lattice import commutator_coeffs, structure_constants
from chevalley_iwasawa.errors import (
    NotInKernelError,
    NotSpecialLinearError,
    PrecisionError,
    UnsupportedTypeError,
)
from chevalley_iwasawa.group_model import (
    MatrixRealization,
    commutator,
    valuation_axiom_failures,
    verify_steinberg,
)
from chevalley_iwasawa.padic import AtLeast, PAdic, constants_PQ
from chevalley_iwasawa.root_system import Root, build_root_system, parse_cartan_type
from chevalley_iwasawa.verification import level_two_cosets, ordered_basis_law, sl2_constants, valuation_laws


def test_unsupported_types(g2, a1):
    with pytest.raises(UnsupportedTypeError, match="no realization"):
        MatrixRealization(g2, 5, 4)
    with pytest.raises(PrecisionError):
        MatrixRealization(a1, 5, 1)


def test_elementary_matrices(a2_model):
    assert a2_model.slot(Root((1, 1))) == (0, 2)
    assert a2_model.slot(Root((-1, 0))) == (1, 0)
    x = a2_model.x_elem(Root((0, 1)), 5)
    assert x.rows == ((1, 0, 0), (0, 1, 5), (0, 0, 1))
    h = a2_model.h_elem(Root((1, 0)), 6)
    inverse = pow(6, -1, 5**4)
    assert h.rows == ((6, 0, 0), (0, inverse, 0), (0, 0, 1))


def test_inverse_and_commutator(a2_model, rng):
    g = a2_model.random_element(rng)
    h = a2_model.random_element(rng)
    assert (g * g.inverse()).is_identity()
    assert commutator(g, g).is_identity()
    assert commutator(g, h).determinant() == 1
    assert (g * h).inverse() == h.inverse() * g.inverse()


def test_validation_names_the_entry(a1):
    model = MatrixRealization(a1, 5, 3)
    with pytest.raises(NotInKernelError) as info:
        model.validate(model.element([[2, 0], [0, 1]]))
    assert info.value.entry == (0, 0)
    assert "(1,1)" in str(info.value)
    with pytest.raises(NotSpecialLinearError):
        model.validate(model.element([[6, 0], [0, 1]]))
    with pytest.raises(NotInKernelError):
        model.validate(MatrixRealization(build_root_system(parse_cartan_type("A2")), 5, 3).identity())


def test_sl2_product_decomposition(a1_model):
    p, M = 5, a1_model.precision
    g = a1_model.x_elem(Root((1,)), p) * a1_model.x_elem(Root((-1,)), p)
    assert g.rows == ((1 + p * p, p), (p, 1))
    params = a1_model.triangular_decompose(g)
    Q = PAdic(p, M, 1 + p * p).inverse()
    assert params.u[Root((-1,))] == Q * p
    assert params.w[Root((1,))] == Q * p
    assert params.v[1] == PAdic(p, M, p * p)
    torus = a1_model.lazard_coordinates(g).e[1]
    assert torus == constants_PQ(p, M - 1).P
    assert sl2_constants(a1_model) == []


def test_sl2_constants_in_a2(a2_model):
    assert sl2_constants(a2_model) == []


def test_identity_decomposes_to_zero(a2_model):
    e = a2_model.lazard_coordinates(a2_model.identity())
    assert all(a.is_zero() for a in e)
    assert len(e) == 8
    assert a2_model.omega(a2_model.identity()) == AtLeast(4)


def test_decomposition_methods_agree(a2_model, rng):
    for _ in range(20):
        g = a2_model.random_product(rng)
        assert a2_model.triangular_decompose(g) == a2_model.triangular_decompose(g, method="minors")
    with pytest.raises(ValueError):
        a2_model.triangular_decompose(a2_model.identity(), method="qr")


def test_coordinates_round_trip(a2_model, rng):
    for _ in range(50):
        g = a2_model.random_product(rng)
        assert a2_model.from_coordinates(a2_model.lazard_coordinates(g)) == g


def test_omega(a2_model, rng):
    assert a2_model.omega(a2_model.x_elem(Root((1, 1)), 3 * 25)) == 2
    for k in (1, 2, 3):
        for _ in range(10):
            w = a2_model.omega(a2_model.random_element(rng, k))
            assert isinstance(w, AtLeast) or w >= k


@pytest.mark.parametrize("text, p", [("A1", 3), ("A1", 5), ("A2", 3), ("A2", 5)])
def test_valuation_axioms(text, p, rng):
    model = MatrixRealization(build_root_system(parse_cartan_type(text)), p, 6)
    for _ in range(500):
        g = model.random_element(rng, rng.randint(1, 2))
        h = model.random_element(rng, rng.randint(1, 2))
        assert valuation_axiom_failures(model, g, h) == []


@pytest.mark.parametrize("text", ["A1", "A2"])
def test_ordered_basis_law(text, rng):
    model = MatrixRealization(build_root_system(parse_cartan_type(text)), 3, 7)
    assert ordered_basis_law(model, rng, 500) == []


@pytest.mark.parametrize("text", ["A1", "A2"])
def test_omega_is_the_minimum_parameter_valuation(text, rng):
    model = MatrixRealization(build_root_system(parse_cartan_type(text)), 3, 6)
    assert valuation_laws(model, rng, 500) == []


def test_level_two_cosets(a1):
    model = MatrixRealization(a1, 3, 3)
    assert level_two_cosets(model) == []


@pytest.mark.parametrize("text, p", [("A1", 5), ("A2", 3), ("A2", 5), ("A3", 3)])
def test_group_identities(text, p):
    model = MatrixRealization(build_root_system(parse_cartan_type(text)), p, 5)
    results = verify_steinberg(model)
    assert results
    assert all(r.passed for r in results), [r.detail for r in results if not r.passed]
    assert all(r.name.startswith("group:") for r in results)


def test_corrupted_commutator_sign_fails(a2):
    model = MatrixRealization(a2, 3, 5)
    coeffs = commutator_coeffs(Root((1, 0)), Root((0, 1)), structure_constants(a2))
    wrong = dataclasses.replace(coeffs, c_table={**coeffs.c_table, (1, 1): -coeffs.c_table[(1, 1)]})
    instance = relations.commutator(a2, wrong, 3, model.exponent_precision)
    [result] = verify_steinberg(model, [instance])
    assert result.name == "group:commutator(a1, a2)"
    assert not result.passed
    assert result.detail.startswith("entry (1,3)")
    [good] = verify_steinberg(model, [relations.commutator(a2, coeffs, 3, model.exponent_precision)])
    assert good.passed
