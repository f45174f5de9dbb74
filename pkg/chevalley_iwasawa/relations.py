"""The four relation families of the presentation, as pairs of generator words.

A word is a sequence of (generator position, p-adic exponent); the letter
(i, a) stands for g_i^a, which is (1 + V_alpha)^a or (1 + W_delta)^a on the
algebra side and x_alpha(p)^a = x_alpha(pa) or h_delta((1+p)^a) on the group side.
"""

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional

from chevalley_iwasawa.chevalley_lattice import (
    CommutatorCoeffs,
    StructureConstants,
    commutator_coeffs,
    coroot_coordinates,
    structure_constants,
)
from chevalley_iwasawa.padic import PAdic, constants_PQ
from chevalley_iwasawa.root_system import GeneratorKind, Root, RootSystem, generator_order

logger = logging.getLogger(__name__)


class RelationFamily(str, enum.Enum):
    TORUS_CONJUGATION = "torus_conjugation"
    COMMUTING = "commuting"
    COMMUTATOR = "commutator"
    OPPOSITE_ROOTS = "opposite_roots"


@dataclass(frozen=True)
class GeneratorWord:
    letters: tuple[tuple[int, PAdic], ...]

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def render(self, labels) -> str:
        return " ".join(f"{labels[i].name}^({a.signed()})" for i, a in self.letters)


@dataclass(frozen=True)
class RelationInstance:
    family: RelationFamily
    roots: tuple[Root, ...]
    lhs: GeneratorWord
    rhs: GeneratorWord
    simple_index: Optional[int] = None
    constants: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def name(self) -> str:
        params = [str(r) for r in self.roots]
        if self.simple_index is not None:
            params.append(f"W{self.simple_index}")
        return f"{self.family.value}({', '.join(params)})"


class GeneratorPositions:
    """Position lookup in the canonical generator order."""

    def __init__(self, rs: RootSystem):
        self.labels = generator_order(rs)
        self.root = {}
        self.torus = {}
        for label in self.labels:
            if label.kind is GeneratorKind.TORUS:
                self.torus[label.simple_index] = label.position
            else:
                self.root[label.root] = label.position


def torus_conjugation(rs: RootSystem, alpha: Root, i: int, p: int, precision: int, pos=None) -> RelationInstance:
    pos = pos or GeneratorPositions(rs)
    pairing = rs.pairing(alpha, Root.simple(i, rs.rank))
    q = PAdic(p, precision, 1 + p) ** pairing
    one = PAdic(p, precision, 1)
    return RelationInstance(
        family=RelationFamily.TORUS_CONJUGATION,
        roots=(alpha,),
        simple_index=i,
        lhs=GeneratorWord(((pos.torus[i], one), (pos.root[alpha], one))),
        rhs=GeneratorWord(((pos.root[alpha], q), (pos.torus[i], one))),
        constants={"pairing": pairing, "q": q},
    )


def commuting(rs: RootSystem, alpha1: Root, alpha2: Root, p: int, precision: int, pos=None) -> RelationInstance:
    pos = pos or GeneratorPositions(rs)
    one = PAdic(p, precision, 1)
    return RelationInstance(
        family=RelationFamily.COMMUTING,
        roots=(alpha1, alpha2),
        lhs=GeneratorWord(((pos.root[alpha1], one), (pos.root[alpha2], one))),
        rhs=GeneratorWord(((pos.root[alpha2], one), (pos.root[alpha1], one))),
    )


def commutator(
    rs: RootSystem, coeffs: CommutatorCoeffs, p: int, precision: int, pos=None
) -> RelationInstance:
    pos = pos or GeneratorPositions(rs)
    one = PAdic(p, precision, 1)
    alpha1, alpha2 = coeffs.alpha1, coeffs.alpha2
    factors = tuple(
        (pos.root[gamma], PAdic(p, precision, coeffs.c_table[ij] * p ** (sum(ij) - 1)))
        for ij, gamma in coeffs.roots()
    )
    return RelationInstance(
        family=RelationFamily.COMMUTATOR,
        roots=(alpha1, alpha2),
        lhs=GeneratorWord(((pos.root[alpha1], one), (pos.root[alpha2], one))),
        rhs=GeneratorWord(factors + ((pos.root[alpha2], one), (pos.root[alpha1], one))),
        constants={"c": dict(coeffs.c_table), "order": coeffs.product_order},
    )


def opposite_roots(rs: RootSystem, alpha: Root, p: int, precision: int, pos=None) -> RelationInstance:
    pos = pos or GeneratorPositions(rs)
    pq = constants_PQ(p, precision)
    n = coroot_coordinates(alpha, rs).n
    one = PAdic(p, precision, 1)
    torus = tuple((pos.torus[i], pq.P * k) for i, k in enumerate(n, start=1) if k)
    return RelationInstance(
        family=RelationFamily.OPPOSITE_ROOTS,
        roots=(alpha,),
        lhs=GeneratorWord(((pos.root[alpha], one), (pos.root[-alpha], one))),
        rhs=GeneratorWord(((pos.root[-alpha], pq.Q),) + torus + ((pos.root[alpha], pq.Q),)),
        constants={"Q": pq.Q, "P": pq.P, "n": n},
    )


def enumerate_relations(
    rs: RootSystem, p: int, precision: int, sc: StructureConstants = None
) -> list[RelationInstance]:
    """Every relation instance of the presentation, constants at the given precision, in a fixed order."""
    sc = sc or structure_constants(rs)
    pos = GeneratorPositions(rs)
    roots = rs.roots
    out = []
    for alpha in roots:
        for i in range(1, rs.rank + 1):
            out.append(torus_conjugation(rs, alpha, i, p, precision, pos))
    for k, alpha1 in enumerate(roots):
        for alpha2 in roots[k + 1 :]:
            if alpha1 != -alpha2 and not rs.is_root(alpha1 + alpha2):
                out.append(commuting(rs, alpha1, alpha2, p, precision, pos))
    for alpha1 in roots:
        for alpha2 in roots:
            if alpha1 != alpha2 and rs.is_root(alpha1 + alpha2):
                coeffs = commutator_coeffs(alpha1, alpha2, sc)
                out.append(commutator(rs, coeffs, p, precision, pos))
    for alpha in rs.positive_roots:
        out.append(opposite_roots(rs, alpha, p, precision, pos))
    logger.info("%s: %d relation instances at precision %d", rs.cartan_type, len(out), precision)
    return out


def family_counts(instances: list[RelationInstance]) -> dict[str, int]:
    counts = {family.value: 0 for family in RelationFamily}
    for r in instances:
        counts[r.family.value] += 1
    return counts
