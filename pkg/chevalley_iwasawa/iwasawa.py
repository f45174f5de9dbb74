"""The truncated Iwasawa algebra Lambda(G(1)) / (M^N + p^m Lambda).

An element is a finite combination of ordered monomials b^n = b_1^{n_1} ... b_d^{n_d},
where b_i = g_i - 1 for the ordered basis g_i of G(1). The coefficient of a monomial
of degree k is only meaningful modulo p^min(m, N - k).

Products never rewrite words symbolically: a word in the g_i is multiplied out in
the group and re-expanded from its ordered-basis coordinates.
"""

import itertools
import logging
import math
import time
from typing import Optional, Union

import numpy as np

from chevalley_iwasawa import schemas
from chevalley_iwasawa.errors import ParseError, PrecisionError, PrimeMismatchError
from chevalley_iwasawa.group_model import GroupElement, MatrixRealization
from chevalley_iwasawa.padic import (
    AtLeast,
    PAdic,
    Valuation,
    binomial,
    factorial_valuation,
    format_digits,
    guard_digits,
    int_valuation,
    parse_digits,
)
from chevalley_iwasawa.relations import GeneratorWord, RelationInstance, enumerate_relations
from chevalley_iwasawa.root_system import CartanType, build_root_system

logger = logging.getLogger(__name__)

MultiIndex = tuple[int, ...]


def group_precision(p: int, precision: int, degree: int) -> int:
    """Matrix precision M for coefficient precision m and degree bound N."""
    return precision + 1 + guard_digits(p, degree)


class OrderedSeries:
    """Sparse map from ordered multi-indices of degree < N to p-adic coefficients."""

    def __init__(self, algebra: "TruncatedIwasawaAlgebra", coefficients: dict):
        self.algebra = algebra
        self.coefficients: dict[MultiIndex, PAdic] = {
            n: c for n, c in coefficients.items() if not c.is_zero()
        }

    def __getitem__(self, n: MultiIndex) -> PAdic:
        return self.coefficients.get(n, self.algebra.zero_coefficient(n))

    def __eq__(self, other):
        if not isinstance(other, OrderedSeries):
            return NotImplemented
        return self.algebra is other.algebra and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(sorted((n, c.residue) for n, c in self.coefficients.items())))

    def __add__(self, other: "OrderedSeries") -> "OrderedSeries":
        self.algebra.check_compatible(other)
        a = self.algebra
        return a.from_vector(a.to_vector(self) + a.to_vector(other))

    def __neg__(self) -> "OrderedSeries":
        a = self.algebra
        return a.from_vector(-a.to_vector(self))

    def __sub__(self, other: "OrderedSeries") -> "OrderedSeries":
        return self + (-other)

    def scale(self, c: Union[int, PAdic]) -> "OrderedSeries":
        a = self.algebra
        factor = c.residue if isinstance(c, PAdic) else c
        return a.from_vector(a.to_vector(self) * (factor % a.modulus))

    def __mul__(self, other: "OrderedSeries") -> "OrderedSeries":
        return self.algebra.convolve(self, other)

    def augmentation(self) -> PAdic:
        return self[self.algebra.monomials[0]]

    def is_zero(self) -> bool:
        return not self.coefficients

    def __repr__(self):
        algebra = self.algebra
        if self.is_zero():
            return "0"
        terms = []
        for n in algebra.monomials:
            if n in self.coefficients:
                terms.append(f"{self.coefficients[n].signed()}*{algebra.monomial_name(n)}")
        return " + ".join(terms)


class TruncatedIwasawaAlgebra:
    """Lambda(G(1)) truncated at degree N and coefficient precision m, backed by a matrix realization."""

    def __init__(self, model: MatrixRealization, degree: int, precision: int):
        if degree < 1 or precision < 1:
            raise PrecisionError("degree bound and precision must be positive")
        needed = precision + factorial_valuation(degree - 1, model.p)
        if model.exponent_precision < needed:
            raise PrecisionError(
                f"group precision {model.precision} too small for m={precision}, N={degree}",
                required=needed + 1,
            )
        self.model = model
        self.p = model.p
        self.degree = degree
        self.precision = precision
        self.modulus = self.p**precision
        self.labels = model.labels
        self.d = len(self.labels)

        self.monomials: list[MultiIndex] = []
        for k in range(degree):
            for letters in itertools.combinations_with_replacement(range(self.d), k):
                n = [0] * self.d
                for i in letters:
                    n[i] += 1
                self.monomials.append(tuple(n))
        self.index = {n: k for k, n in enumerate(self.monomials)}
        self.exponents = np.array(self.monomials, dtype=np.int64).reshape(len(self.monomials), self.d)
        self.degrees = self.exponents.sum(axis=1)

        size = len(self.monomials)
        wide = size * self.p ** (2 * precision) >= 2**62
        self.dtype = object if wide else np.int64
        self.moduli = np.array(
            [self.p ** min(precision, degree - int(k)) for k in self.degrees], dtype=self.dtype
        )
        self._tables: dict[int, np.ndarray] = {}
        self._dirac_cache: dict[tuple, np.ndarray] = {}
        self._ordered_cache: dict[MultiIndex, GroupElement] = {}
        logger.debug(
            "algebra %s p=%d N=%d m=%d: %d monomials, dtype %s",
            model.rs.cartan_type,
            self.p,
            degree,
            precision,
            size,
            "object" if wide else "int64",
        )

    @classmethod
    def build(cls, cartan_type: CartanType, p: int, degree: int, precision: int) -> "TruncatedIwasawaAlgebra":
        rs = build_root_system(cartan_type)
        return cls(MatrixRealization(rs, p, group_precision(p, precision, degree)), degree, precision)

    def __repr__(self):
        return f"TruncatedIwasawaAlgebra({self.model.rs.cartan_type}, p={self.p}, N={self.degree}, m={self.precision})"

    @property
    def size(self) -> int:
        return len(self.monomials)

    # coefficients and vectors

    def coefficient_precision(self, n: MultiIndex) -> int:
        return min(self.precision, self.degree - sum(n))

    def zero_coefficient(self, n: MultiIndex) -> PAdic:
        return PAdic(self.p, self.coefficient_precision(n), 0)

    def check_compatible(self, series: OrderedSeries):
        other = series.algebra
        if other is self:
            return
        if other.p != self.p:
            raise PrimeMismatchError(f"series over p={other.p} and p={self.p}")
        raise PrecisionError(
            f"series from different truncations: (N={other.degree}, m={other.precision}) "
            f"and (N={self.degree}, m={self.precision})"
        )

    def to_vector(self, series: OrderedSeries) -> np.ndarray:
        self.check_compatible(series)
        vec = np.zeros(self.size, dtype=self.dtype)
        for n, c in series.coefficients.items():
            vec[self.index[n]] = c.residue
        return vec

    def from_vector(self, vec: np.ndarray) -> OrderedSeries:
        vec = vec % self.moduli
        coefficients = {}
        for k in np.flatnonzero(vec):
            n = self.monomials[k]
            coefficients[n] = PAdic(self.p, self.coefficient_precision(n), int(vec[k]))
        return OrderedSeries(self, coefficients)

    def monomial(self, n: MultiIndex, coefficient: Union[int, PAdic] = 1) -> OrderedSeries:
        if len(n) != self.d:
            raise ValueError(f"multi-index of length {len(n)} for {self.d} generators")
        if sum(n) >= self.degree:
            return self.zero()
        value = coefficient.residue if isinstance(coefficient, PAdic) else coefficient
        return OrderedSeries(self, {n: PAdic(self.p, self.coefficient_precision(n), value)})

    def one(self) -> OrderedSeries:
        return self.monomial(self.monomials[0])

    def zero(self) -> OrderedSeries:
        return OrderedSeries(self, {})

    def variable(self, i: int) -> OrderedSeries:
        n = [0] * self.d
        n[i] = 1
        return self.monomial(tuple(n))

    def monomial_name(self, n: MultiIndex) -> str:
        parts = [
            self.labels[i].name if k == 1 else f"{self.labels[i].name}^{k}" for i, k in enumerate(n) if k
        ]
        return "*".join(parts) or "1"

    # Dirac measures

    def dirac(self, g: GroupElement) -> OrderedSeries:
        """prod_i (1 + b_i)^{e_i} over the ordered-basis coordinates e of g."""
        return self.from_vector(self._dirac_vector(g))

    def _dirac_vector(self, g: GroupElement) -> np.ndarray:
        e = self.model.lazard_coordinates(g)
        table = np.zeros((self.d, self.degree), dtype=self.dtype)
        for i, a in enumerate(e):
            for k in range(self.degree):
                table[i, k] = binomial(a, k, precision=self.precision).residue
        vec = np.ones(self.size, dtype=self.dtype)
        for i in range(self.d):
            vec = vec * table[i, self.exponents[:, i]] % self.modulus
        return vec % self.moduli

    def normal_order(self, word: GeneratorWord) -> OrderedSeries:
        """The ordered form of a word g_{i1}^{a1} ... g_{ik}^{ak}, evaluated in the group."""
        return self.dirac(self.model.evaluate_word(word))

    def ordered_element(self, j: MultiIndex) -> GroupElement:
        """g^j = g_1^{j_1} ... g_d^{j_d}."""
        if j not in self._ordered_cache:
            self._ordered_cache[j] = self.model.from_coordinates(j)
        return self._ordered_cache[j]

    @staticmethod
    def monomial_dirac_form(n: MultiIndex):
        """b^n = sum_{j <= n} prod_k C(n_k, j_k) (-1)^(n_k - j_k) delta_{g^j}, as (j, integer) pairs."""
        for j in itertools.product(*(range(k + 1) for k in n)):
            coeff = 1
            for nk, jk in zip(n, j):
                coeff *= math.comb(nk, jk) * (-1) ** (nk - jk)
            yield j, coeff

    def dirac_form(self, series: OrderedSeries) -> dict:
        """series as a finite combination of Dirac measures at ordered-basis products g^j."""
        out: dict[MultiIndex, int] = {}
        for n, c in series.coefficients.items():
            for j, coeff in self.monomial_dirac_form(n):
                out[j] = (out.get(j, 0) + coeff * c.residue) % self.modulus
        return {j: PAdic(self.p, self.precision, v) for j, v in out.items() if v}

    # convolution

    def _product_dirac(self, i: int, j: MultiIndex) -> np.ndarray:
        key = (i, j)
        if key not in self._dirac_cache:
            g = self.model.generator_element(self.labels[i], 1) * self.ordered_element(j)
            self._dirac_cache[key] = self._dirac_vector(g)
        return self._dirac_cache[key]

    def left_table(self, i: int) -> np.ndarray:
        """Matrix of left multiplication by b_i on the monomial basis."""
        if i in self._tables:
            return self._tables[i]
        start = time.perf_counter()
        size = self.size
        table = np.zeros((size, size), dtype=self.dtype)
        for col, n in enumerate(self.monomials):
            if sum(n) + 1 >= self.degree:
                continue
            first = next((k for k, v in enumerate(n) if v), self.d)
            if i <= first:
                target = list(n)
                target[i] += 1
                table[self.index[tuple(target)], col] = 1
                continue
            vec = np.zeros(size, dtype=self.dtype)
            vec[col] = -1
            for j, coeff in self.monomial_dirac_form(n):
                vec = (vec + coeff * self._product_dirac(i, j)) % self.moduli
            table[:, col] = vec
        self._tables[i] = table
        logger.debug("left table for %s built in %.2fs", self.labels[i].name, time.perf_counter() - start)
        return table

    def _apply(self, i: int, vec: np.ndarray) -> np.ndarray:
        return self.left_table(i).dot(vec) % self.moduli

    def convolve(self, a: OrderedSeries, b: OrderedSeries) -> OrderedSeries:
        """Product a * b, monomial by monomial through the left-multiplication tables."""
        self.check_compatible(a)
        self.check_compatible(b)
        bvec = self.to_vector(b)
        images = {self.monomials[0]: bvec}

        def image(n: MultiIndex) -> np.ndarray:
            # b^n * b with b^n = b_first * b^(n - e_first)
            if n not in images:
                first = next(k for k, v in enumerate(n) if v)
                rest = list(n)
                rest[first] -= 1
                images[n] = self._apply(first, image(tuple(rest)))
            return images[n]

        total = np.zeros(self.size, dtype=self.dtype)
        for n in sorted(a.coefficients, key=self.index.get):
            total = (total + a.coefficients[n].residue * image(n)) % self.moduli
        return self.from_vector(total)

    def word_product(self, letters) -> OrderedSeries:
        """b_{i1} * ... * b_{ik} for generator positions i1 ... ik in the given (any) order."""
        vec = self.to_vector(self.one())
        for i in reversed(list(letters)):
            vec = self._apply(i, vec)
        return self.from_vector(vec)

    # valuation and graded structure

    def omega_tilde(self, series: OrderedSeries) -> Valuation:
        """inf over terms of val_p(coefficient) + degree; exact up to min(m, N).

        Every term hidden by the truncation has val_p + degree >= min(m, N), so a
        stored minimum at the cap is still exact.
        """
        cap = min(self.precision, self.degree)
        best = min(
            (int_valuation(c.residue, self.p) + sum(n) for n, c in series.coefficients.items()),
            default=None,
        )
        if best is None or best > cap:
            return AtLeast(cap)
        return best

    def reduce_mod_p(self, series: OrderedSeries) -> dict:
        """Image in the F_p-algebra: non-zero residues mod p."""
        self.check_compatible(series)
        out = {}
        for n, c in series.coefficients.items():
            r = c.residue % self.p
            if r:
                out[n] = r
        return out

    def graded_leading_term_check(self, letters) -> schemas.CheckResult:
        """A word of n letters equals its sorted monomial modulo p and degree n + 1."""
        letters = tuple(letters)
        n = len(letters)
        name = f"graded:{'*'.join(self.labels[i].name for i in letters) or '1'}"
        if n >= self.degree:
            raise PrecisionError(f"degree {n} word needs N > {n}", required=n + 1)
        start = time.perf_counter()
        sorted_index = [0] * self.d
        for i in letters:
            sorted_index[i] += 1
        expected = {tuple(sorted_index): 1}
        reduced = self.reduce_mod_p(self.word_product(letters))
        actual = {k: v for k, v in reduced.items() if sum(k) <= n}
        passed = actual == expected
        detail = None
        if not passed:
            detail = ", ".join(f"{self.monomial_name(k)}: {v}" for k, v in sorted(actual.items())) or "0"
        return schemas.CheckResult(name=name, passed=passed, detail=detail, seconds=time.perf_counter() - start)

    def graded_dimension_count(self, n: int) -> int:
        if n >= self.degree:
            raise PrecisionError(f"degree {n} is truncated away at N={self.degree}", required=n + 1)
        return sum(1 for m in self.monomials if sum(m) == n)

    # relations

    def relation_instances(self) -> list[RelationInstance]:
        return enumerate_relations(self.model.rs, self.p, self.model.exponent_precision)

    def check_relation(self, relation: RelationInstance) -> schemas.CheckResult:
        start = time.perf_counter()
        lhs, rhs = self.normal_order(relation.lhs), self.normal_order(relation.rhs)
        passed = lhs == rhs
        detail = None
        if not passed:
            n = next(n for n in self.monomials if lhs[n] != rhs[n])
            detail = f"coefficient of {self.monomial_name(n)}: {lhs[n]} != {rhs[n]}"
            logger.warning("relation %s fails: %s", relation.name, detail)
        return schemas.CheckResult(
            name=f"relation:{relation.name}", passed=passed, detail=detail, seconds=time.perf_counter() - start
        )

    # text format

    def header(self) -> list[str]:
        return [
            f"p={self.p} m={self.precision} N={self.degree} type={self.model.rs.cartan_type}",
            "order=" + ",".join(label.name for label in self.labels),
        ]


def graded_dimension_formula(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


def serialize_series(series: OrderedSeries) -> str:
    algebra = series.algebra
    lines = algebra.header()
    for n in algebra.monomials:
        if n in series.coefficients:
            lines.append(" ".join(str(k) for k in n) + " : " + format_digits(series.coefficients[n]))
    return "\n".join(lines) + "\n"


def parse_series(text: str, algebra: TruncatedIwasawaAlgebra) -> OrderedSeries:
    lines = [line for line in text.splitlines() if line.strip()]
    if lines[:2] != algebra.header():
        raise ParseError(f"series header {lines[:2]} does not match {algebra.header()}")
    coefficients = {}
    for line in lines[2:]:
        try:
            index, digits = line.split(":", 1)
            n = tuple(int(k) for k in index.split())
        except ValueError as e:
            raise ParseError(f"malformed series line {line!r}") from e
        if n not in algebra.index:
            raise ParseError(f"multi-index {n} is not an ordered monomial of degree < {algebra.degree}")
        value = parse_digits(digits, algebra.p)
        if value.precision != algebra.coefficient_precision(n):
            raise ParseError(f"coefficient of {n} has precision {value.precision}")
        coefficients[n] = value
    return OrderedSeries(algebra, coefficients)


def omega_tilde(series: OrderedSeries) -> Valuation:
    return series.algebra.omega_tilde(series)


def convolve(a: OrderedSeries, b: OrderedSeries) -> OrderedSeries:
    return a.algebra.convolve(a, b)


def dirac(algebra: TruncatedIwasawaAlgebra, g: GroupElement) -> OrderedSeries:
    return algebra.dirac(g)


def check_relations(
    algebra: TruncatedIwasawaAlgebra, instances: Optional[list[RelationInstance]] = None
) -> list[schemas.CheckResult]:
    instances = algebra.relation_instances() if instances is None else instances
    return [algebra.check_relation(r) for r in instances]
