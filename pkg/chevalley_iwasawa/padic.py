"""Truncated p-adic integers Z/p^m with tracked precision.

Every scalar in the package flows through `PAdic`. Values are immutable; the
precision of a result is the smallest precision of its operands and only
shrinks through explicit truncation or exact division by a power of p.
"""

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from chevalley_iwasawa import config
from chevalley_iwasawa.errors import (
    InvalidPrimeError,
    NonUnitError,
    ParseError,
    PrecisionError,
    PrimeMismatchError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AtLeast:
    """Valuation marker: the true value is >= bound but cannot be seen at this precision."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


Valuation = Union[int, AtLeast]


def int_valuation(n: int, p: int) -> int:
    """v_p(n) for a non-zero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_valuation(k: int, p: int) -> int:
    """v_p(k!) by Legendre's formula."""
    v, q = 0, p
    while q <= k:
        v += k // q
        q *= p
    return v


@functools.lru_cache(maxsize=None)
def require_odd_prime(p: int) -> int:
    if p == 2:
        raise InvalidPrimeError("the case p=2 is excluded")
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise InvalidPrimeError(f"{p} is not a prime")
    return p


def guard_digits(p: int, max_index: int, slack: int = None) -> int:
    """Extra digits carried by a series summed up to index max_index; bounds v_p(k!) for k <= max_index."""
    if slack is None:
        slack = config.get_settings().guard_slack
    return -(-(max(max_index, 1) - 1) // (p - 1)) + slack


@dataclass(frozen=True, eq=False)
class PAdic:
    p: int
    precision: int
    residue: int

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.precision < 0:
            raise PrecisionError(f"negative precision {self.precision}")
        object.__setattr__(self, "residue", self.residue % self.p**self.precision)

    @classmethod
    def of(cls, value, p: int, precision: int) -> "PAdic":
        """Coerce an int, a Fraction with unit denominator or another PAdic."""
        if isinstance(value, PAdic):
            if value.p != p:
                raise PrimeMismatchError(f"cannot read a {value.p}-adic value as {p}-adic")
            return value.truncate(precision)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise NonUnitError(f"{value} is not a p-adic integer for p={p}")
            modulus = p**precision
            return cls(p, precision, value.numerator * pow(value.denominator, -1, modulus))
        return cls(p, precision, int(value))

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    # arithmetic

    def _coerce(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise PrimeMismatchError(f"mixing primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PAdic.of(other, self.p, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdic(self.p, min(self.precision, other.precision), self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PAdic(self.p, self.precision, -self.residue)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdic(self.p, min(self.precision, other.precision), self.residue - other.residue)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdic(self.p, min(self.precision, other.precision), self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return PAdic(self.p, self.precision, pow(self.residue, exponent, self.modulus))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "PAdic":
        if not self.is_unit():
            raise NonUnitError(f"{self} is not a unit; divide exactly or pre-scale")
        return PAdic(self.p, self.precision, pow(self.residue, -1, self.modulus))

    def divide_exact(self, other) -> "PAdic":
        """self / other when other = p^v * unit and p^v divides self; v digits of precision are lost."""
        other = self._coerce(other)
        v = other.val()
        if isinstance(v, AtLeast):
            raise NonUnitError(f"division by {other}, which is zero at its precision")
        precision = min(self.precision, other.precision) - v
        if precision < 0:
            raise PrecisionError(f"dividing by p^{v} needs precision >= {v}", required=v)
        shift = self.p**v
        if self.residue % shift:
            raise NonUnitError(f"{self} is not divisible by p^{v}")
        modulus = self.p**precision
        unit = (other.residue // shift) % modulus
        return PAdic(self.p, precision, (self.residue // shift) * pow(unit, -1, modulus) if modulus > 1 else 0)

    # comparison

    def __eq__(self, other):
        if isinstance(other, PAdic):
            return (self.p, self.precision, self.residue) == (other.p, other.precision, other.residue)
        if isinstance(other, int):
            return (self.residue - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.precision, self.residue))

    def agrees_with(self, other, precision: int = None) -> bool:
        """Equality modulo p^precision (default: the common precision)."""
        other = self._coerce(other)
        if precision is None:
            precision = min(self.precision, other.precision)
        if precision > min(self.precision, other.precision):
            raise PrecisionError(f"cannot compare at precision {precision}", required=precision)
        return (self.residue - other.residue) % self.p**precision == 0

    # valuation and precision

    def val(self) -> Valuation:
        if self.residue == 0:
            return AtLeast(self.precision)
        return int_valuation(self.residue, self.p)

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.precision > 0 and self.residue % self.p != 0

    def truncate(self, precision: int) -> "PAdic":
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}", required=precision
            )
        return PAdic(self.p, precision, self.residue)

    def signed(self) -> int:
        """Representative in (-p^m/2, p^m/2]."""
        modulus = self.modulus
        return self.residue - modulus if self.residue > modulus // 2 else self.residue

    def digits(self) -> list[int]:
        out, r = [], self.residue
        while r:
            r, d = divmod(r, self.p)
            out.append(d)
        return out or [0]

    def __repr__(self):
        return f"PAdic({format_digits(self)}, p={self.p})"

    def __str__(self):
        return format_digits(self)


def format_digits(a: PAdic) -> str:
    """Base-p digits, least significant first, with the precision suffix: "0,1,3:^4"."""
    return ",".join(str(d) for d in a.digits()) + f":^{a.precision}"


def parse_digits(text: str, p: int) -> PAdic:
    try:
        body, precision = text.strip().split(":^")
        digits = [int(d) for d in body.split(",")]
        precision = int(precision)
    except ValueError as e:
        raise ParseError(f"malformed p-adic digit string {text!r}") from e
    if any(d < 0 or d >= p for d in digits):
        raise ParseError(f"digit out of range for p={p} in {text!r}")
    if len(digits) > max(precision, 1):
        raise ParseError(f"{text!r} has more digits than its precision")
    return PAdic(p, precision, sum(d * p**i for i, d in enumerate(digits)))


# series


def _series_length(p: int, precision: int, v: int, loss) -> int:
    """Largest index k whose term can still matter: loss(k) bounds the digits lost at index k."""
    k = 1
    while k * v - loss(k) < precision:
        k += 1
    return max(k - 1, 1)


def log_1unit(x: PAdic) -> PAdic:
    """p-adic logarithm of a 1-unit, sum of (-1)^(k+1) y^k / k with y = x - 1."""
    p, precision = x.p, x.precision
    if precision == 0 or (x.residue - 1) % p:
        raise NonUnitError(f"{x} is not congruent to 1 mod p")
    y = x.residue - 1
    if y == 0:
        return PAdic(p, precision, 0)
    v = int_valuation(y, p)
    terms = _series_length(p, precision, v, lambda k: int(math.log(k, p) + 1e-9))
    work = precision + guard_digits(p, terms)
    modulus = p**work
    total, power = 0, 1
    for k in range(1, terms + 1):
        power = power * y % modulus
        vk = int_valuation(k, p)
        term = (power // p**vk) * pow(k // p**vk, -1, modulus)
        total += term if k % 2 else -term
    logger.debug("log_1unit: %d terms at working precision %d", terms, work)
    return PAdic(p, precision, total)


def exp_1unit(y: PAdic) -> PAdic:
    """p-adic exponential of y with val(y) >= 1; the result is a 1-unit."""
    p, precision = y.p, y.precision
    if precision == 0:
        return PAdic(p, 0, 0)
    if y.residue % p:
        raise NonUnitError(f"exp does not converge at {y}: valuation must be >= 1")
    if y.residue == 0:
        return PAdic(p, precision, 1)
    v = int_valuation(y.residue, p)
    terms = _series_length(p, precision, v, lambda k: (k - 1) // (p - 1))
    work = precision + guard_digits(p, terms)
    modulus = p**work
    total, power, fact = 1, 1, 1
    for k in range(1, terms + 1):
        power = power * y.residue % modulus
        fact *= k
        vk = factorial_valuation(k, p)
        total += (power // p**vk) * pow(fact // p**vk, -1, modulus)
    return PAdic(p, precision, total)


def binomial(a: PAdic, k: int, precision: int = None) -> PAdic:
    """binom(a, k) = a(a-1)...(a-k+1)/k!; the input needs precision + v_p(k!) digits."""
    if k < 0:
        raise ValueError("k must be non-negative")
    loss = factorial_valuation(k, a.p)
    if precision is None:
        precision = a.precision - loss
    if precision < 0 or a.precision < precision + loss:
        raise PrecisionError(
            f"binomial(., {k}) at precision {precision} needs input precision {precision + loss}, "
            f"got {a.precision}",
            required=precision + loss,
        )
    return PAdic(a.p, precision, math.comb(a.residue, k))


@dataclass(frozen=True)
class PadicConstants:
    """P = log(1+p^2)/log(1+p) and Q = (1+p^2)^-1."""

    p: int
    m: int
    P: PAdic
    Q: PAdic


def constants_PQ(p: int, m: int) -> PadicConstants:
    one_plus_p = PAdic(p, m + 1, 1 + p)
    one_plus_p2 = PAdic(p, m + 1, 1 + p * p)
    P = log_1unit(one_plus_p2).divide_exact(log_1unit(one_plus_p)).truncate(m)
    Q = one_plus_p2.truncate(m).inverse()
    return PadicConstants(p=p, m=m, P=P, Q=Q)


def power_of_one_plus_p(exponent: PAdic) -> PAdic:
    """(1+p)^a = exp(a log(1+p)) for a p-adic exponent a; exact to the exponent's precision + 1."""
    p = exponent.p
    log_base = log_1unit(PAdic(p, exponent.precision + 1, 1 + p))
    return exp_1unit(PAdic(p, exponent.precision + 1, exponent.residue * log_base.residue))
