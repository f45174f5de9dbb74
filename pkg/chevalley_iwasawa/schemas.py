from pydantic import BaseModel, ConfigDict
from typing import Optional, List


# Check reports
class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: Optional[str] = None
    seconds: Optional[float] = None


class VerifyReport(BaseModel):
    cartan_type: str
    prime: int
    degree: int
    precision: int
    group_precision: int
    seed: int
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]


# Presentation document
class PresentationMetadata(BaseModel):
    cartan_type: str
    prime: int
    precision: int
    representation: str
    sign_convention: str
    root_order: str
    generator_count: int
    digit_format: str = "base-p digits, least significant first, ':^m' precision suffix"


class GeneratorRecord(BaseModel):
    position: int
    kind: str
    name: str
    root: Optional[List[int]] = None
    simple_index: Optional[int] = None
    group_element: str


class StructureConstantRecord(BaseModel):
    alpha: List[int]
    beta: List[int]
    value: int


class WordLetter(BaseModel):
    generator: str
    position: int
    exponent: str  # p-adic digit string
    symbolic: str


class CommutatorTerm(BaseModel):
    i: int
    j: int
    root: List[int]
    c: int


class RelationRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    roots: List[List[int]]
    simple_index: Optional[int] = None
    lhs: List[WordLetter]
    rhs: List[WordLetter]

    # torus conjugation
    pairing: Optional[int] = None
    q: Optional[str] = None

    # commutator
    c: Optional[List[CommutatorTerm]] = None

    # opposite roots
    Q: Optional[str] = None
    P: Optional[str] = None
    coroot: Optional[List[int]] = None
    nP: Optional[List[str]] = None


class Presentation(BaseModel):
    """Generators and relations of the Iwasawa algebra, constants rendered at precision m."""

    metadata: PresentationMetadata
    generators: List[GeneratorRecord]
    structure_constants: List[StructureConstantRecord]
    relations: List[RelationRecord]

    def counts(self) -> dict:
        out: dict = {}
        for r in self.relations:
            out[r.family] = out.get(r.family, 0) + 1
        return out


# Decomposition printout
class ParameterRecord(BaseModel):
    generator: str
    parameter: str
    coordinate: str


class DecomposeReport(BaseModel):
    cartan_type: str
    prime: int
    group_precision: int
    omega: str
    parameter_valuation: str
    parameters: List[ParameterRecord]
