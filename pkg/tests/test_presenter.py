import pytest

from chevalley_iwasawa.errors import InvalidPrimeError, NotInKernelError, ParseError, PrimeMismatchError
from chevalley_iwasawa.group_model import MatrixRealization, verify_steinberg
from chevalley_iwasawa.padic import PAdic, constants_PQ, format_digits
from chevalley_iwasawa.presenter import (
    emit_presentation,
    instances_from_document,
    parse_presentation,
    render_json,
    render_plain,
    run_decompose,
    validate_presentation,
)
from chevalley_iwasawa.root_system import parse_cartan_type


def test_a1_presentation():
    doc = emit_presentation(parse_cartan_type("A1"), 5, 4)
    assert doc.metadata.generator_count == 3
    assert [g.name for g in doc.generators] == ["V[-a1]", "W1", "V[a1]"]
    assert doc.generators[1].group_element == "h_a1(1+p)"
    assert doc.generators[2].group_element == "x_a1(p)"
    assert doc.counts() == {"torus_conjugation": 2, "opposite_roots": 1}
    assert doc.metadata.representation == "standard"


def test_opposite_roots_record():
    doc = emit_presentation(parse_cartan_type("A1"), 5, 4)
    record = next(r for r in doc.relations if r.family == "opposite_roots")
    pq = constants_PQ(5, 4)
    assert record.Q == format_digits(pq.Q)
    assert record.P == format_digits(pq.P)
    assert record.coroot == [1]
    assert [x.symbolic for x in record.rhs] == ["Q", "(1)*P", "Q"]


def test_a2_presentation():
    doc = emit_presentation(parse_cartan_type("A2"), 5, 4)
    assert len(doc.generators) == 8
    assert doc.counts()["opposite_roots"] == 3
    commutators = [r for r in doc.relations if r.family == "commutator"]
    assert len(commutators) == 12
    assert all(len(r.c) == 1 and r.c[0].i == r.c[0].j == 1 for r in commutators)
    torus = next(r for r in doc.relations if r.family == "torus_conjugation" and r.roots == [[1, 0]] and r.simple_index == 1)
    assert torus.pairing == 2
    assert torus.q == format_digits(PAdic(5, 4, 36))


def test_g2_presentation_is_symbolic():
    doc = emit_presentation(parse_cartan_type("G2"), 7, 4)
    assert doc.metadata.generator_count == 14
    assert doc.metadata.representation == "symbolic"
    assert doc.counts()["opposite_roots"] == 6
    assert validate_presentation(doc) == []


def test_even_prime_is_rejected():
    with pytest.raises(InvalidPrimeError):
        emit_presentation(parse_cartan_type("A2"), 2, 4)


def test_json_round_trip_validates():
    doc = emit_presentation(parse_cartan_type("A2"), 3, 4)
    text = render_json(doc)
    assert render_json(emit_presentation(parse_cartan_type("A2"), 3, 4)) == text
    parsed = parse_presentation(text)
    assert parsed == doc
    assert validate_presentation(parsed) == []
    assert len(instances_from_document(parsed)) == len(doc.relations)


def test_tampered_constant_is_reported():
    doc = emit_presentation(parse_cartan_type("A1"), 5, 4)
    doc.relations[0].q = "0:^4"
    problems = validate_presentation(doc)
    assert problems == ["relation 0 (torus_conjugation)"]


def test_tampered_exponent_fails_in_the_group(a1):
    doc = emit_presentation(parse_cartan_type("A1"), 5, 4)
    record = next(r for r in doc.relations if r.family == "opposite_roots")
    record.rhs[0].exponent = "1:^4"
    assert validate_presentation(doc)
    results = verify_steinberg(MatrixRealization(a1, 5, 5), instances_from_document(doc))
    assert [r.name for r in results if not r.passed] == ["group:opposite_roots(a1)"]


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_presentation("{}")
    with pytest.raises(ParseError):
        parse_presentation("not json")


def test_plain_rendering():
    text = render_plain(emit_presentation(parse_cartan_type("A1"), 5, 4))
    assert "generators (3):" in text
    assert "[opposite_roots] (1+V[a1])(1+V[-a1]) = (1+V[-a1])^Q(1+W1)^(1)*P(1+V[a1])^Q" in text


def _write(tmp_path, text):
    path = tmp_path / "g.txt"
    path.write_text(text)
    return path


def test_decompose_sl2_product(tmp_path):
    path = _write(tmp_path, "# x_a1(5) x_-a1(5)\n5 5 2\n26 5\n5 1\n")
    report = run_decompose(path, parse_cartan_type("A1"), 5)
    Q = PAdic(5, 5, 26).inverse()
    assert report.omega == "1"
    assert report.parameter_valuation == "1"
    assert [r.generator for r in report.parameters] == ["V[-a1]", "W1", "V[a1]"]
    assert report.parameters[0].parameter == format_digits(Q * 5)
    assert report.parameters[1].parameter == "1,0,1:^5"
    assert report.parameters[1].coordinate == format_digits(constants_PQ(5, 4).P)
    assert report.parameters[2].parameter == format_digits(Q * 5)


def test_decompose_identity(tmp_path):
    path = _write(tmp_path, "3 4 3\n1 0 0\n0 1 0\n0 0 1\n")
    report = run_decompose(path, parse_cartan_type("A2"), 3)
    assert report.omega == ">=4"
    assert all(r.coordinate == "0:^3" for r in report.parameters)


def test_decompose_rejections(tmp_path):
    with pytest.raises(NotInKernelError):
        run_decompose(_write(tmp_path, "5 3 2\n2 0\n0 1\n"), parse_cartan_type("A1"), 5)
    with pytest.raises(PrimeMismatchError):
        run_decompose(_write(tmp_path, "3 3 2\n1 0\n0 1\n"), parse_cartan_type("A1"), 5)
    with pytest.raises(ParseError):
        run_decompose(_write(tmp_path, "5 3 2\n1 0\n"), parse_cartan_type("A1"), 5)


def test_decompose_entries_above_header_precision(tmp_path):
    report = run_decompose(_write(tmp_path, "5 3 2\n1,0,0,1:^4 0\n0 1\n"), parse_cartan_type("A1"), 5)
    assert report.omega == ">=3"
    assert all(r.coordinate == "0:^2" for r in report.parameters)
