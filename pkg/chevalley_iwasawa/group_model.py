"""Type A realization of G(Z_p) inside SL_{l+1}(Z/p^M).

Elements of the first congruence kernel G(1) are decomposed uniquely as

    prod_{beta < 0} x_beta(u_beta) * prod_{delta} h_delta(1 + v_delta) * prod_{alpha > 0} x_alpha(w_alpha)

in the canonical generator order, and the ordered-basis (Lazard) coordinates
are read off that decomposition.
"""

import itertools
import logging
import random
import time
from dataclasses import dataclass
from typing import Optional, Union

from chevalley_iwasawa import schemas
from chevalley_iwasawa.errors import (
    ConsistencyError,
    NonUnitError,
    NotInKernelError,
    NotSpecialLinearError,
    PrecisionError,
    PrimeMismatchError,
    UnsupportedTypeError,
)
from chevalley_iwasawa.padic import (
    AtLeast,
    PAdic,
    Valuation,
    int_valuation,
    log_1unit,
    power_of_one_plus_p,
)
from chevalley_iwasawa.relations import GeneratorWord, RelationInstance, enumerate_relations
from chevalley_iwasawa.root_system import (
    GeneratorKind,
    GeneratorLabel,
    Root,
    RootSystem,
    generator_order,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, PAdic]


@dataclass(frozen=True)
class GroupElement:
    """Square matrix over Z/p^M, entries stored as residues."""

    p: int
    precision: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def entry(self, i: int, j: int) -> PAdic:
        return PAdic(self.p, self.precision, self.rows[i][j])

    @property
    def entries(self) -> list[list[PAdic]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def _check_compatible(self, other: "GroupElement"):
        if other.p != self.p:
            raise PrimeMismatchError(f"multiplying {self.p}-adic and {other.p}-adic matrices")
        if other.precision != self.precision or other.size != self.size:
            raise PrecisionError(f"matrices over Z/{self.p}^{self.precision} and Z/{other.p}^{other.precision}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check_compatible(other)
        mod = self.modulus
        cols = list(zip(*other.rows))
        rows = tuple(tuple(sum(a * b for a, b in zip(row, col)) % mod for col in cols) for row in self.rows)
        return GroupElement(self.p, self.precision, rows)

    def __pow__(self, exponent: int) -> "GroupElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = identity(self.p, self.precision, self.size)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def determinant(self) -> int:
        return _det(self.rows, self.modulus)

    def inverse(self) -> "GroupElement":
        """Adjugate; exact because the determinant is 1."""
        n, mod = self.size, self.modulus
        if self.determinant() != 1 % mod:
            raise NotSpecialLinearError("inverse requested for a matrix with determinant != 1")
        if n == 1:
            return self
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [r[:i] + r[i + 1 :] for k, r in enumerate(self.rows) if k != j]
                row.append((-1) ** (i + j) * _det(minor, mod) % mod)
            rows.append(tuple(row))
        return GroupElement(self.p, self.precision, tuple(rows))

    def is_identity(self) -> bool:
        return self == identity(self.p, self.precision, self.size)

    def truncate(self, precision: int) -> "GroupElement":
        if precision > self.precision:
            raise PrecisionError(f"cannot lift a matrix from precision {self.precision}", required=precision)
        mod = self.p**precision
        return GroupElement(self.p, precision, tuple(tuple(a % mod for a in r) for r in self.rows))

    def __str__(self):
        return "\n".join(" ".join(str(self.entry(i, j)) for j in range(self.size)) for i in range(self.size))


def identity(p: int, precision: int, n: int) -> GroupElement:
    return GroupElement(p, precision, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """[g, h] = g h g^-1 h^-1."""
    return g * h * g.inverse() * h.inverse()


def _det(rows, modulus: int) -> int:
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if not term:
                break
        total += term
    return total % modulus


@dataclass(frozen=True)
class TriangularParams:
    u: dict  # negative root -> PAdic
    v: dict  # simple index -> PAdic, the torus factor is h_delta(1 + v)
    w: dict  # positive root -> PAdic

    def values(self) -> list[PAdic]:
        return list(self.u.values()) + list(self.v.values()) + list(self.w.values())

    def __eq__(self, other):
        if not isinstance(other, TriangularParams):
            return NotImplemented
        return self.u == other.u and self.v == other.v and self.w == other.w


@dataclass(frozen=True)
class LazardCoordinates:
    e: tuple[PAdic, ...]

    def __iter__(self):
        return iter(self.e)

    def __len__(self):
        return len(self.e)


def valuation_bound(v: Valuation) -> int:
    return v.bound if isinstance(v, AtLeast) else v


def min_valuation(values) -> Valuation:
    """Minimum of valuations; exact only when an exact value lies below every marker bound."""
    exact = [v for v in values if not isinstance(v, AtLeast)]
    markers = [v.bound for v in values if isinstance(v, AtLeast)]
    if exact and (not markers or min(exact) < min(markers)):
        return min(exact)
    if not markers:
        raise ValueError("empty valuation list")
    return AtLeast(min(markers + exact))


class MatrixRealization:
    """G(Z_p) for a type A root system in the standard representation, modulo p^M."""

    representation = "standard"

    def __init__(self, rs: RootSystem, p: int, precision: int):
        if rs.cartan_type.family != "A":
            raise UnsupportedTypeError(
                f"{rs.cartan_type} has no realization; only type A carries a verification engine"
            )
        if precision < 2:
            raise PrecisionError("group precision must be at least 2", required=2)
        self.rs = rs
        self.p = p
        self.precision = precision
        self.n = rs.rank + 1
        self.modulus = p**precision
        self.labels: list[GeneratorLabel] = generator_order(rs)

    def __repr__(self):
        return f"MatrixRealization({self.rs.cartan_type}, p={self.p}, M={self.precision})"

    @property
    def exponent_precision(self) -> int:
        return self.precision - 1

    # elementary generators

    def slot(self, gamma: Root) -> tuple[int, int]:
        """Matrix position of the root e_i - e_j."""
        self.rs.require_root(gamma)
        nonzero = [i for i, c in enumerate(gamma.coeffs) if c]
        first, last = nonzero[0], nonzero[-1] + 1
        return (first, last) if gamma.is_positive() else (last, first)

    def _scalar(self, t: Scalar) -> int:
        if isinstance(t, PAdic):
            if t.p != self.p:
                raise PrimeMismatchError(f"{t.p}-adic parameter for a {self.p}-adic group")
            if t.precision < self.precision:
                raise PrecisionError(
                    f"parameter {t} below group precision {self.precision}", required=self.precision
                )
            return t.residue % self.modulus
        return t % self.modulus

    def identity(self) -> GroupElement:
        return identity(self.p, self.precision, self.n)

    def element(self, rows) -> GroupElement:
        return GroupElement(self.p, self.precision, tuple(tuple(a % self.modulus for a in r) for r in rows))

    def x_elem(self, gamma: Root, t: Scalar) -> GroupElement:
        i, j = self.slot(gamma)
        rows = [[int(a == b) for b in range(self.n)] for a in range(self.n)]
        rows[i][j] = self._scalar(t)
        return self.element(rows)

    def w_elem(self, gamma: Root, lam: Scalar) -> GroupElement:
        """w_gamma(lam) = x_gamma(lam) x_-gamma(-lam^-1) x_gamma(lam)."""
        lam = self._unit(lam)
        inverse = lam.inverse()
        return self.x_elem(gamma, lam) * self.x_elem(-gamma, -inverse) * self.x_elem(gamma, lam)

    def h_elem(self, gamma: Root, lam: Scalar) -> GroupElement:
        """h_gamma(lam) = w_gamma(lam) w_gamma(1)^-1."""
        return self.w_elem(gamma, lam) * self.w_elem(gamma, 1).inverse()

    def _unit(self, lam: Scalar) -> PAdic:
        value = PAdic(self.p, self.precision, self._scalar(lam))
        if not value.is_unit():
            raise NonUnitError(f"h and w need a unit parameter, got {value}")
        return value

    def generator_element(self, label: GeneratorLabel, exponent: Scalar) -> GroupElement:
        """g_i^a: x_gamma(p)^a = x_gamma(pa) and h_delta(1+p)^a = h_delta((1+p)^a)."""
        a = self._exponent(exponent)
        if label.kind is GeneratorKind.TORUS:
            t = power_of_one_plus_p(a).truncate(self.precision)
            return self.h_elem(Root.simple(label.simple_index, self.rs.rank), t)
        return self.x_elem(label.root, self.p * a.residue)

    def _exponent(self, a: Scalar) -> PAdic:
        if isinstance(a, PAdic):
            if a.p != self.p:
                raise PrimeMismatchError(f"{a.p}-adic exponent for a {self.p}-adic group")
            if a.precision < self.exponent_precision:
                raise PrecisionError(
                    f"exponent {a} needs precision {self.exponent_precision}", required=self.exponent_precision
                )
            return a.truncate(self.exponent_precision)
        return PAdic(self.p, self.exponent_precision, a)

    def evaluate_word(self, word: GeneratorWord) -> GroupElement:
        g = self.identity()
        for position, exponent in word:
            g = g * self.generator_element(self.labels[position], exponent)
        return g

    # membership and valuation

    def validate(self, g: GroupElement) -> GroupElement:
        """Reject matrices outside G(1), naming the first offending entry."""
        if g.p != self.p:
            raise PrimeMismatchError(f"{g.p}-adic matrix for a {self.p}-adic group")
        if g.size != self.n:
            raise NotInKernelError(f"expected a {self.n}x{self.n} matrix, got {g.size}x{g.size}")
        for i in range(self.n):
            for j in range(self.n):
                if (g.rows[i][j] - int(i == j)) % self.p:
                    raise NotInKernelError(
                        f"entry ({i + 1},{j + 1}) = {g.entry(i, j)} is not congruent to the identity mod p",
                        entry=(i, j),
                    )
        if g.determinant() != 1 % g.modulus:
            raise NotSpecialLinearError(f"determinant {PAdic(self.p, g.precision, g.determinant())} is not 1")
        return g

    def omega(self, g: GroupElement) -> Valuation:
        """Largest k with g = 1 mod p^k, or AtLeast(M)."""
        self.validate(g)
        values = []
        for i in range(self.n):
            for j in range(self.n):
                diff = (g.rows[i][j] - int(i == j)) % g.modulus
                if diff:
                    values.append(int_valuation(diff, self.p))
        return min(values) if values else AtLeast(g.precision)

    def coset_key(self, g: GroupElement, k: int) -> tuple:
        """The class of g in G(1)/G(k)."""
        mod = self.p**k
        return tuple(a % mod for r in g.rows for a in r)

    # decomposition

    def _ldu_elimination(self, g: GroupElement):
        mod, n = self.modulus, self.n
        a = [list(r) for r in g.rows]
        lower = [[int(i == j) for j in range(n)] for i in range(n)]
        for k in range(n):
            inv = pow(a[k][k], -1, mod)
            for i in range(k + 1, n):
                f = a[i][k] * inv % mod
                lower[i][k] = f
                for j in range(k, n):
                    a[i][j] = (a[i][j] - f * a[k][j]) % mod
        d = [a[k][k] for k in range(n)]
        upper = [[int(i == j) for j in range(n)] for i in range(n)]
        for k in range(n):
            inv = pow(d[k], -1, mod)
            for j in range(k + 1, n):
                upper[k][j] = a[k][j] * inv % mod
        return lower, d, upper

    def _ldu_minors(self, g: GroupElement):
        """Same factorization from leading principal minors."""
        mod, n, rows = self.modulus, self.n, g.rows

        def minor(row_idx, col_idx):
            return _det([[rows[r][c] for c in col_idx] for r in row_idx], mod)

        leading = [1] + [minor(range(k), range(k)) for k in range(1, n + 1)]
        d = [leading[k + 1] * pow(leading[k], -1, mod) % mod for k in range(n)]
        lower = [[int(i == j) for j in range(n)] for i in range(n)]
        upper = [[int(i == j) for j in range(n)] for i in range(n)]
        for k in range(n - 1):
            inv = pow(leading[k + 1], -1, mod)
            head = list(range(k))
            for i in range(k + 1, n):
                lower[i][k] = minor(head + [i], list(range(k + 1))) * inv % mod
                upper[k][i] = minor(list(range(k + 1)), head + [i]) * inv % mod
        return lower, d, upper

    def _peel(self, lower, d, upper) -> TriangularParams:
        mod, n, p, M = self.modulus, self.n, self.p, self.precision
        cur = [row[:] for row in upper]
        w = {}
        for alpha in self.rs.positive_roots:
            i, j = self.slot(alpha)
            t = cur[i][j]
            w[alpha] = PAdic(p, M, t)
            for c in range(n):
                cur[i][c] = (cur[i][c] - t * cur[j][c]) % mod

        cur = [row[:] for row in lower]
        u = {}
        for beta in reversed(self.rs.negative_roots):
            i, j = self.slot(beta)
            t = cur[i][j]
            u[beta] = PAdic(p, M, t)
            for r in range(n):
                cur[r][j] = (cur[r][j] - t * cur[r][i]) % mod
        u = {beta: u[beta] for beta in self.rs.negative_roots}

        v, running = {}, 1
        for i in range(1, n):
            running = running * d[i - 1] % mod
            v[i] = PAdic(p, M, running - 1)
        return TriangularParams(u=u, v=v, w=w)

    def triangular_decompose(self, g: GroupElement, method: str = "elimination") -> TriangularParams:
        self.validate(g)
        if method == "elimination":
            factors = self._ldu_elimination(g)
        elif method == "minors":
            factors = self._ldu_minors(g)
        else:
            raise ValueError(f"unknown decomposition method {method!r}")
        params = self._peel(*factors)
        if self.recompose(params) != g:
            raise ConsistencyError(f"decomposition does not recompose to the input:\n{g}")
        return params

    def recompose(self, params: TriangularParams) -> GroupElement:
        g = self.identity()
        for beta in self.rs.negative_roots:
            g = g * self.x_elem(beta, params.u[beta])
        for i, v in params.v.items():
            g = g * self.h_elem(Root.simple(i, self.rs.rank), v + 1)
        for alpha in self.rs.positive_roots:
            g = g * self.x_elem(alpha, params.w[alpha])
        return g

    def lazard_coordinates(self, g: GroupElement) -> LazardCoordinates:
        params = self.triangular_decompose(g)
        p, M = self.p, self.precision
        log_base = log_1unit(PAdic(p, M, 1 + p))
        out = []
        for label in self.labels:
            if label.kind is GeneratorKind.NEG_ROOT:
                out.append(params.u[label.root].divide_exact(p))
            elif label.kind is GeneratorKind.POS_ROOT:
                out.append(params.w[label.root].divide_exact(p))
            else:
                out.append(log_1unit(params.v[label.simple_index] + 1).divide_exact(log_base))
        return LazardCoordinates(e=tuple(out))

    def from_coordinates(self, e) -> GroupElement:
        g = self.identity()
        for label, a in zip(self.labels, e):
            g = g * self.generator_element(label, a)
        return g

    # sampling

    def random_element(self, rng: random.Random, k: int = 1) -> GroupElement:
        """Element of G(k) from uniform ordered-basis coordinates scaled by p^(k-1)."""
        scale = self.p ** (k - 1)
        bound = self.p**self.exponent_precision
        return self.from_coordinates([rng.randrange(bound) * scale for _ in self.labels])

    def random_product(self, rng: random.Random, factors: int = 10) -> GroupElement:
        g = self.identity()
        bound = self.p**self.exponent_precision
        for _ in range(factors):
            label = rng.choice(self.labels)
            g = g * self.generator_element(label, rng.randrange(bound))
        return g


def valuation_axiom_failures(model: MatrixRealization, g: GroupElement, h: GroupElement) -> list[str]:
    """Names of the p-valuation axioms violated by the pair (g, h); markers only ever satisfy a bound."""
    p = model.p
    wg, wh = model.omega(g), model.omega(h)
    failures = []
    if valuation_bound(wg) <= 1 / (p - 1):
        failures.append("lower_bound")

    if not isinstance(wg, AtLeast) and not isinstance(wh, AtLeast):
        if valuation_bound(model.omega(g * h.inverse())) < min(wg, wh):
            failures.append("filtration")
        if valuation_bound(model.omega(commutator(g, h))) < wg + wh and wg + wh < model.precision:
            failures.append("commutator")

    if not isinstance(wg, AtLeast) and wg + 1 < model.precision:
        power = model.omega(g**p)
        if power != wg + 1:
            failures.append("p_power")
    return failures


def verify_steinberg(
    model: MatrixRealization, instances: Optional[list[RelationInstance]] = None
) -> list[schemas.CheckResult]:
    """Check every group identity behind the relation families as a matrix equality mod p^M."""
    if instances is None:
        instances = enumerate_relations(model.rs, model.p, model.exponent_precision)
    results = []
    for r in instances:
        start = time.perf_counter()
        lhs, rhs = model.evaluate_word(r.lhs), model.evaluate_word(r.rhs)
        passed = lhs == rhs
        detail = None
        if not passed:
            diff = next(
                (i, j)
                for i in range(model.n)
                for j in range(model.n)
                if lhs.rows[i][j] != rhs.rows[i][j]
            )
            detail = f"entry ({diff[0] + 1},{diff[1] + 1}): {lhs.entry(*diff)} != {rhs.entry(*diff)}"
            logger.warning("group identity %s fails: %s", r.name, detail)
        results.append(
            schemas.CheckResult(
                name=f"group:{r.name}", passed=passed, detail=detail, seconds=time.perf_counter() - start
            )
        )
    return results
