"""Signed structure constants of a Chevalley basis and the integers derived from them.

Signs are fixed by the extraspecial-pair method: for every non-simple positive
root xi the pair (alpha, beta), alpha minimal in root order with alpha + beta = xi,
gets N = +(v + 1). Every other constant is forced by the Jacobi identity and
the rules

    N_{b,a} = -N_{a,b},    N_{-a,-b} = -N_{a,b},
    N_{a,b} / (c,c) = N_{b,c} / (a,a) = N_{c,a} / (b,b)   when a + b + c = 0.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import sympy

from chevalley_iwasawa.errors import ConsistencyError, NotARootError
from chevalley_iwasawa.root_system import Root, RootSystem

logger = logging.getLogger(__name__)

# Basis key of the Chevalley lattice: an int i for H_{delta_i} (1-based) or a Root for X_gamma
BasisKey = Union[int, Root]
LatticeElement = dict


@dataclass(frozen=True)
class StructureConstants:
    root_system: RootSystem
    n_table: dict = field(hash=False, compare=False)

    def __call__(self, gamma1: Root, gamma2: Root) -> int:
        """N_{gamma1, gamma2}; zero when gamma1 + gamma2 is not a root."""
        return self.n_table.get((gamma1, gamma2), 0)

    def items(self):
        return sorted(
            self.n_table.items(), key=lambda item: (item[0][0].sort_key(), item[0][1].sort_key())
        )


@dataclass(frozen=True)
class CommutatorCoeffs:
    alpha1: Root
    alpha2: Root
    c_table: dict = field(hash=False)
    product_order: tuple = ()

    def roots(self) -> list[tuple[tuple[int, int], Root]]:
        """(i, j) and i*alpha1 + j*alpha2 for every factor, in product order."""
        return [((i, j), i * self.alpha1 + j * self.alpha2) for i, j in self.product_order]


@dataclass(frozen=True)
class CorootCoordinates:
    root: Root
    n: tuple[int, ...]


class _SignSolver:
    """Fills the positive table pair by pair; lookups reduce any pair to a solved positive one."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.index = {r: i for i, r in enumerate(rs.roots)}
        self.positive: dict[tuple[Root, Root], int] = {}

    def length(self, gamma: Root) -> int:
        return self.rs.squared_length(gamma)

    def magnitude(self, a: Root, b: Root) -> int:
        _, v = self.rs.root_string(b, a)
        return v + 1

    def n(self, a: Root, b: Root) -> int:
        rs = self.rs
        if not rs.is_root(a + b):
            return 0
        if a.is_positive() and b.is_positive():
            if self.index[a] < self.index[b]:
                return self.positive[(a, b)]
            return -self.positive[(b, a)]
        if not a.is_positive() and not b.is_positive():
            return -self.n(-a, -b)
        c = -(a + b)
        # exactly one of (b, c) and (c, a) is a same-sign pair
        if b.is_positive() == c.is_positive():
            value = Fraction(self.length(c), self.length(a)) * self.n(b, c)
        else:
            value = Fraction(self.length(c), self.length(b)) * self.n(c, a)
        if value.denominator != 1:
            raise ConsistencyError(f"non-integral N_({a},{b}) = {value}")
        return int(value)

    def solve(self) -> None:
        rs = self.rs
        positives = rs.positive_roots
        for xi in positives:
            pairs = [
                (a, xi - a)
                for a in positives
                if (xi - a).is_positive()
                and rs.is_root(xi - a)
                and self.index[a] < self.index[xi - a]
            ]
            if not pairs:
                continue
            (a0, b0), others = pairs[0], pairs[1:]
            self.positive[(a0, b0)] = self.magnitude(a0, b0)
            pivot = self.n(xi, -a0)
            for a, b in others:
                # coefficient of X_{b0} in J(X_a, X_b, X_{-a0}) = 0
                rest = 0
                if rs.is_root(b - a0):
                    rest += self.n(b, -a0) * self.n(b - a0, a)
                if rs.is_root(a - a0):
                    rest += self.n(-a0, a) * self.n(a - a0, b)
                value = Fraction(-rest, pivot)
                if value.denominator != 1 or abs(value) != self.magnitude(a, b):
                    raise ConsistencyError(
                        f"sign solve for ({a}, {b}) gave {value}, expected magnitude {self.magnitude(a, b)}"
                    )
                self.positive[(a, b)] = int(value)


@lru_cache(maxsize=None)
def structure_constants(rs: RootSystem) -> StructureConstants:
    solver = _SignSolver(rs)
    solver.solve()
    table = {}
    for a in rs.roots:
        for b in rs.roots:
            if a != -b and rs.is_root(a + b):
                table[(a, b)] = solver.n(a, b)
    logger.debug("structure constants of %s: %d entries", rs.cartan_type, len(table))
    return StructureConstants(root_system=rs, n_table=table)


@lru_cache(maxsize=None)
def coroot_coordinates(gamma: Root, rs: RootSystem) -> CorootCoordinates:
    """H_gamma = sum n_i H_{delta_i}, with n_i = c_i (delta_i, delta_i) / (gamma, gamma)."""
    rs.require_root(gamma)
    length = rs.squared_length(gamma)
    n = []
    for i, c in enumerate(gamma.coeffs):
        value = Fraction(c * rs.gram[i][i], length)
        if value.denominator != 1:
            raise ConsistencyError(f"coroot of {gamma} is not integral")
        n.append(int(value))
    return CorootCoordinates(root=gamma, n=tuple(n))


# the Lie ring g_Z


def bracket(x: LatticeElement, y: LatticeElement, sc: StructureConstants) -> LatticeElement:
    """Bilinear bracket on the Chevalley basis {H_i, X_gamma}."""
    rs = sc.root_system
    out: dict = {}

    def add(key, value):
        if value:
            out[key] = out.get(key, 0) + value
            if not out[key]:
                del out[key]

    for kx, cx in x.items():
        for ky, cy in y.items():
            coeff = cx * cy
            if isinstance(kx, int) and isinstance(ky, int):
                continue
            if isinstance(kx, int):
                add(ky, coeff * _h_weight(rs, kx, ky))
            elif isinstance(ky, int):
                add(kx, -coeff * _h_weight(rs, ky, kx))
            elif kx == -ky:
                for i, n in enumerate(coroot_coordinates(kx, rs).n, start=1):
                    add(i, coeff * n)
            else:
                add(kx + ky, coeff * sc(kx, ky))
    return out


def _h_weight(rs: RootSystem, i: int, gamma: Root) -> int:
    """gamma(H_{delta_i})."""
    delta = Root.simple(i, rs.rank)
    return 2 * rs.inner_product(gamma, delta) // rs.gram[i - 1][i - 1]


def lattice_basis(rs: RootSystem) -> list[BasisKey]:
    return list(range(1, rs.rank + 1)) + list(rs.roots)


def jacobi_defects(rs: RootSystem, sc: StructureConstants) -> list[tuple]:
    """Basis triples (x, y, z) where [[x,y],z] + [[y,z],x] + [[z,x],y] is non-zero."""
    basis = lattice_basis(rs)
    failures = []
    for i, kx in enumerate(basis):
        for j, ky in enumerate(basis):
            if j <= i:
                continue
            xy = bracket({kx: 1}, {ky: 1}, sc)
            for kz in basis[j + 1 :]:
                total: dict = {}
                for part in (
                    bracket(xy, {kz: 1}, sc),
                    bracket(bracket({ky: 1}, {kz: 1}, sc), {kx: 1}, sc),
                    bracket(bracket({kz: 1}, {kx: 1}, sc), {ky: 1}, sc),
                ):
                    for key, value in part.items():
                        total[key] = total.get(key, 0) + value
                if any(total.values()):
                    failures.append((kx, ky, kz))
    if failures:
        logger.warning("%d Jacobi defects in %s", len(failures), rs.cartan_type)
    return failures


# commutator coefficients


def _span(alpha1: Root, alpha2: Root, rs: RootSystem) -> list[tuple[tuple[int, int], Root]]:
    """Roots i*alpha1 + j*alpha2 with i, j >= 0 ordered by i + j, then i."""
    out = []
    for total in range(1, 8):
        for i in range(total, -1, -1):
            j = total - i
            gamma = i * alpha1 + j * alpha2
            if rs.is_root(gamma):
                out.append(((i, j), gamma))
    return sorted(out, key=lambda item: (sum(item[0]), item[0][0]))


def _ad_matrices(span, sc: StructureConstants) -> dict:
    """ad X_gamma on V = Q*D + span X_gamma, D the grading element [D, X_{i,j}] = (i + j) X_{i,j}."""
    position = {gamma: k + 1 for k, (_, gamma) in enumerate(span)}
    grade = {gamma: i + j for (i, j), gamma in span}
    size = len(span) + 1
    matrices = {}
    for _, gamma in span:
        m = sympy.zeros(size, size)
        m[position[gamma], 0] = -grade[gamma]
        for _, eta in span:
            target = gamma + eta
            if target in position:
                m[position[target], position[eta]] = sc(gamma, eta)
        matrices[gamma] = m
    return matrices


def _exp_nilpotent(m: sympy.Matrix, t) -> sympy.Matrix:
    result = sympy.eye(m.rows)
    term = sympy.eye(m.rows)
    for k in range(1, m.rows + 1):
        term = term * m * t / k
        if term.is_zero_matrix:
            break
        result += term
    return result


def commutator_coeffs(alpha1: Root, alpha2: Root, sc: StructureConstants) -> CommutatorCoeffs:
    """c_ij with x_a1(t) x_a2(u) = prod x_{i a1 + j a2}(c_ij t^i u^j) x_a2(u) x_a1(t).

    The commutator x_a1(1) x_a2(1) x_a1(-1) x_a2(-1) is evaluated exactly in a
    faithful representation of the unipotent group spanned by the factors and
    peeled one grade at a time.
    """
    rs = sc.root_system
    rs.require_root(alpha1)
    rs.require_root(alpha2)
    if alpha1 == -alpha2:
        raise NotARootError(f"{alpha1} and {alpha2} are opposite roots")
    if not rs.is_root(alpha1 + alpha2):
        return CommutatorCoeffs(alpha1=alpha1, alpha2=alpha2, c_table={}, product_order=())

    span = _span(alpha1, alpha2, rs)
    ad = _ad_matrices(span, sc)
    one = sympy.Integer(1)
    current = (
        _exp_nilpotent(ad[alpha1], one)
        * _exp_nilpotent(ad[alpha2], one)
        * _exp_nilpotent(ad[alpha1], -one)
        * _exp_nilpotent(ad[alpha2], -one)
    )

    table = {}
    order = []
    factors = [item for item in span if item[0][0] > 0 and item[0][1] > 0]
    for level in sorted({i + j for (i, j), _ in factors}):
        row = [(ij, gamma) for ij, gamma in factors if sum(ij) == level]
        readings = {ij: -current[1 + _index(span, gamma), 0] / level for ij, gamma in row}
        for ij, gamma in row:
            value = sympy.Rational(readings[ij])
            if value.q != 1:
                raise ConsistencyError(f"c{ij} = {value} for ({alpha1}, {alpha2}) is not integral")
            if value:
                table[ij] = int(value)
                order.append(ij)
                current = _exp_nilpotent(ad[gamma], -value) * current
    if current != sympy.eye(current.rows):
        raise ConsistencyError(f"commutator of ({alpha1}, {alpha2}) not exhausted by its factors")
    if table.get((1, 1)) != sc(alpha1, alpha2):
        raise ConsistencyError(f"c11 of ({alpha1}, {alpha2}) differs from N_(a1,a2)")
    return CommutatorCoeffs(alpha1=alpha1, alpha2=alpha2, c_table=table, product_order=tuple(order))


def _index(span, gamma: Root) -> int:
    return next(k for k, (_, g) in enumerate(span) if g == gamma)
