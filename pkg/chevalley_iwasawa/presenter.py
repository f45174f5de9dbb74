"""Emit, render, re-read and re-validate the presentation document."""

import logging
from typing import Optional

from pydantic import ValidationError

from chevalley_iwasawa import schemas
from chevalley_iwasawa.chevalley_lattice import structure_constants
from chevalley_iwasawa.errors import ParseError, PrecisionError, PrimeMismatchError
from chevalley_iwasawa.group_model import MatrixRealization, min_valuation, verify_steinberg
from chevalley_iwasawa.matrix_io import read_matrix
from chevalley_iwasawa.padic import PAdic, format_digits, parse_digits, require_odd_prime
from chevalley_iwasawa.relations import (
    GeneratorWord,
    RelationFamily,
    RelationInstance,
    enumerate_relations,
)
from chevalley_iwasawa.root_system import (
    CartanType,
    GeneratorKind,
    GeneratorLabel,
    Root,
    build_root_system,
    generator_order,
    parse_cartan_type,
)

logger = logging.getLogger(__name__)

SIGN_CONVENTION = "extraspecial pairs positive; N(-a,-b) = -N(a,b)"
ROOT_ORDER = "signed height, then larger leading simple-root coefficients first"


def _group_element(label: GeneratorLabel) -> str:
    if label.kind is GeneratorKind.TORUS:
        return f"h_a{label.simple_index}(1+p)"
    return f"x_{label.root}(p)"


def _symbolic_exponents(r: RelationInstance) -> tuple[list[str], list[str]]:
    lhs = ["1"] * len(r.lhs)
    if r.family is RelationFamily.TORUS_CONJUGATION:
        return lhs, [f"(1+p)^({r.constants['pairing']})", "1"]
    if r.family is RelationFamily.COMMUTATOR:
        factors = [f"({r.constants['c'][ij]})*p^{sum(ij) - 1}" for ij in r.constants["order"]]
        return lhs, factors + ["1", "1"]
    if r.family is RelationFamily.OPPOSITE_ROOTS:
        torus = [f"({k})*P" for k in r.constants["n"] if k]
        return lhs, ["Q"] + torus + ["Q"]
    return lhs, ["1"] * len(r.rhs)


def _letters(word: GeneratorWord, symbolic: list[str], labels) -> list[schemas.WordLetter]:
    return [
        schemas.WordLetter(generator=labels[i].name, position=i, exponent=format_digits(a), symbolic=s)
        for (i, a), s in zip(word, symbolic)
    ]


def _relation_record(r: RelationInstance, labels) -> schemas.RelationRecord:
    lhs_sym, rhs_sym = _symbolic_exponents(r)
    record = schemas.RelationRecord(
        family=r.family.value,
        roots=[list(root.coeffs) for root in r.roots],
        simple_index=r.simple_index,
        lhs=_letters(r.lhs, lhs_sym, labels),
        rhs=_letters(r.rhs, rhs_sym, labels),
    )
    if r.family is RelationFamily.TORUS_CONJUGATION:
        record.pairing = r.constants["pairing"]
        record.q = format_digits(r.constants["q"])
    elif r.family is RelationFamily.COMMUTATOR:
        alpha1, alpha2 = r.roots
        record.c = [
            schemas.CommutatorTerm(i=i, j=j, root=list((i * alpha1 + j * alpha2).coeffs), c=r.constants["c"][(i, j)])
            for i, j in r.constants["order"]
        ]
    elif r.family is RelationFamily.OPPOSITE_ROOTS:
        record.Q = format_digits(r.constants["Q"])
        record.P = format_digits(r.constants["P"])
        record.coroot = list(r.constants["n"])
        record.nP = [format_digits(r.constants["P"] * k) for k in r.constants["n"]]
    return record


def emit_presentation(cartan_type: CartanType, p: int, precision: int) -> schemas.Presentation:
    require_odd_prime(p)
    if precision < 1:
        raise PrecisionError("precision must be positive", required=1)
    rs = build_root_system(cartan_type)
    sc = structure_constants(rs)
    labels = generator_order(rs)
    instances = enumerate_relations(rs, p, precision, sc)
    if cartan_type.family != "A":
        logger.warning("%s has no matrix realization; presentation is symbolic only", cartan_type)
    return schemas.Presentation(
        metadata=schemas.PresentationMetadata(
            cartan_type=str(cartan_type),
            prime=p,
            precision=precision,
            representation=MatrixRealization.representation if cartan_type.family == "A" else "symbolic",
            sign_convention=SIGN_CONVENTION,
            root_order=ROOT_ORDER,
            generator_count=len(labels),
        ),
        generators=[
            schemas.GeneratorRecord(
                position=label.position,
                kind=label.kind.value,
                name=label.name,
                root=list(label.root.coeffs) if label.root is not None else None,
                simple_index=label.simple_index,
                group_element=_group_element(label),
            )
            for label in labels
        ],
        structure_constants=[
            schemas.StructureConstantRecord(alpha=list(a.coeffs), beta=list(b.coeffs), value=value)
            for (a, b), value in sc.items()
        ],
        relations=[_relation_record(r, labels) for r in instances],
    )


def render_json(doc: schemas.Presentation) -> str:
    return doc.model_dump_json(indent=2) + "\n"


def render_plain(doc: schemas.Presentation) -> str:
    meta = doc.metadata
    lines = [
        f"Iwasawa algebra of G(1), type {meta.cartan_type}, p = {meta.prime}, constants mod p^{meta.precision}",
        f"representation: {meta.representation}; signs: {meta.sign_convention}",
        "",
        f"generators ({meta.generator_count}):",
    ]
    for g in doc.generators:
        lines.append(f"  {g.position:>3}  {g.name:<16} 1 + {g.name} <-> {g.group_element}")
    lines.append("")
    lines.append("relations:")
    for r in doc.relations:
        lhs = "".join(f"(1+{x.generator})" + (f"^{x.symbolic}" if x.symbolic != "1" else "") for x in r.lhs)
        rhs = "".join(f"(1+{x.generator})" + (f"^{x.symbolic}" if x.symbolic != "1" else "") for x in r.rhs)
        lines.append(f"  [{r.family}] {lhs} = {rhs}")
        if r.q is not None:
            lines.append(f"      q = {r.q}")
        if r.c is not None:
            lines.append("      " + ", ".join(f"c{t.i}{t.j} = {t.c}" for t in r.c))
        if r.Q is not None:
            lines.append(f"      Q = {r.Q}, P = {r.P}, n = {r.coroot}")
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> schemas.Presentation:
    try:
        return schemas.Presentation.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(f"not a presentation document: {e.error_count()} validation errors") from e


def validate_presentation(doc: schemas.Presentation) -> list[str]:
    """Records that differ from a fresh emission; for type A also re-checks the parsed constants in the group."""
    meta = doc.metadata
    cartan_type = parse_cartan_type(meta.cartan_type)
    fresh = emit_presentation(cartan_type, meta.prime, meta.precision)
    problems = []
    if doc.metadata != fresh.metadata:
        problems.append("metadata")
    for k, (ours, theirs) in enumerate(zip(fresh.generators, doc.generators)):
        if ours != theirs:
            problems.append(f"generator {k}")
    if len(doc.generators) != len(fresh.generators):
        problems.append(f"{len(doc.generators)} generators, expected {len(fresh.generators)}")
    if doc.structure_constants != fresh.structure_constants:
        problems.append("structure constants")
    for k, (ours, theirs) in enumerate(zip(fresh.relations, doc.relations)):
        if ours != theirs:
            problems.append(f"relation {k} ({theirs.family})")
    if len(doc.relations) != len(fresh.relations):
        problems.append(f"{len(doc.relations)} relations, expected {len(fresh.relations)}")

    if cartan_type.family == "A" and not problems:
        rs = build_root_system(cartan_type)
        model = MatrixRealization(rs, meta.prime, meta.precision + 1)
        for result in verify_steinberg(model, instances_from_document(doc)):
            if not result.passed:
                problems.append(f"{result.name}: {result.detail}")
    return problems


def instances_from_document(doc: schemas.Presentation) -> list[RelationInstance]:
    """Relation instances rebuilt from the document's parsed digit strings."""
    p = doc.metadata.prime

    def word(letters):
        return GeneratorWord(tuple((x.position, parse_digits(x.exponent, p)) for x in letters))

    return [
        RelationInstance(
            family=RelationFamily(r.family),
            roots=tuple(Root(tuple(c)) for c in r.roots),
            simple_index=r.simple_index,
            lhs=word(r.lhs),
            rhs=word(r.rhs),
        )
        for r in doc.relations
    ]


def run_decompose(
    path, cartan_type: CartanType, p: int, group_precision: Optional[int] = None
) -> schemas.DecomposeReport:
    """Triangular parameters, ordered-basis coordinates and omega of a matrix read from a file."""
    g = read_matrix(path)
    if g.p != p:
        raise PrimeMismatchError(f"matrix file is over p={g.p}, --prime is {p}")
    if group_precision is not None:
        g = g.truncate(group_precision)
    model = MatrixRealization(build_root_system(cartan_type), p, g.precision)
    params = model.triangular_decompose(g)
    coordinates = model.lazard_coordinates(g)
    omega = model.omega(g)
    records = []
    for label in model.labels:
        if label.kind is GeneratorKind.NEG_ROOT:
            parameter = params.u[label.root]
        elif label.kind is GeneratorKind.POS_ROOT:
            parameter = params.w[label.root]
        else:
            parameter = PAdic(p, g.precision, 1) + params.v[label.simple_index]
        records.append(
            schemas.ParameterRecord(
                generator=label.name,
                parameter=format_digits(parameter),
                coordinate=format_digits(coordinates.e[label.position]),
            )
        )
    logger.debug("decomposed %s into %d parameters", cartan_type, len(records))
    return schemas.DecomposeReport(
        cartan_type=str(cartan_type),
        prime=p,
        group_precision=g.precision,
        omega=str(omega),
        parameter_valuation=str(min_valuation([a.val() for a in params.values()])),
        parameters=records,
    )
