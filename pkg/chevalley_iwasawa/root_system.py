"""Root systems of the irreducible Cartan types and the canonical generator order."""

import enum
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

from chevalley_iwasawa.errors import InvalidCartanTypeError, NotARootError

logger = logging.getLogger(__name__)

_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANKS:
            raise InvalidCartanTypeError(f"unknown Cartan family {self.family!r}; expected one of A-G")
        if not _RANKS[self.family](self.rank):
            raise InvalidCartanTypeError(f"{self.family}{self.rank} is not an irreducible Cartan type")

    def __str__(self):
        return f"{self.family}{self.rank}"


def parse_cartan_type(text: str) -> CartanType:
    """Parse "A2", "G2", "d4" into a CartanType."""
    match = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", text)
    if not match:
        raise InvalidCartanTypeError(f"cannot read a Cartan type from {text!r}")
    return CartanType(match.group(1).upper(), int(match.group(2)))


@dataclass(frozen=True)
class Root:
    """Integer coordinates over the simple roots."""

    coeffs: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def is_positive(self) -> bool:
        return self.height > 0

    def sort_key(self) -> tuple:
        # equal heights: larger leading coefficients first, so a1 precedes a2 and -a1 precedes -a2
        return self.height, tuple(-abs(c) for c in self.coeffs)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Root") -> "Root":
        return self + (-other)

    def __rmul__(self, k: int) -> "Root":
        return Root(tuple(k * c for c in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            size = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{size}a{i}")
        text = "".join(terms) or "0"
        return text[1:] if text.startswith("+") else text

    @classmethod
    def simple(cls, i: int, rank: int) -> "Root":
        """The simple root delta_i, 1-based as in Bourbaki numbering."""
        return cls(tuple(1 if j == i - 1 else 0 for j in range(rank)))


# Gram matrices of the simple roots, short roots normalised to squared length 2


def _chain(rank: int, lengths: list[int], links: dict[tuple[int, int], int]) -> list[list[int]]:
    gram = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = lengths[i]
    for (i, j), value in links.items():
        gram[i][j] = gram[j][i] = value
    return gram


def _gram_matrix(ct: CartanType) -> list[list[int]]:
    n = ct.rank
    simply_laced_path = {(i, i + 1): -1 for i in range(n - 1)}
    if ct.family == "A":
        return _chain(n, [2] * n, simply_laced_path)
    if ct.family == "B":
        return _chain(n, [4] * (n - 1) + [2], {(i, i + 1): -2 for i in range(n - 1)})
    if ct.family == "C":
        return _chain(n, [2] * (n - 1) + [4], {**simply_laced_path, (n - 2, n - 1): -2})
    if ct.family == "D":
        links = {(i, i + 1): -1 for i in range(n - 2)}
        links[(n - 3, n - 1)] = -1
        return _chain(n, [2] * n, links)
    if ct.family == "E":
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
        return _chain(n, [2] * n, {e: -1 for e in edges if max(e) < n})
    if ct.family == "F":
        return _chain(4, [4, 4, 2, 2], {(0, 1): -2, (1, 2): -2, (2, 3): -1})
    return _chain(2, [2, 6], {(0, 1): -3})


@dataclass(frozen=True, eq=False)
class RootSystem:
    """One instance per Cartan type (see build_root_system); compared by identity."""

    cartan_type: CartanType
    gram: tuple[tuple[int, ...], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    roots: tuple[Root, ...]
    positive_roots: tuple[Root, ...]
    highest_root: Root

    @property
    def rank(self) -> int:
        return self.cartan_type.rank

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(Root.simple(i, self.rank) for i in range(1, self.rank + 1))

    @property
    def negative_roots(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if not r.is_positive())

    @cached_property
    def _root_set(self) -> frozenset:
        return frozenset(self.roots)

    def is_root(self, gamma: Root) -> bool:
        return gamma in self._root_set

    def require_root(self, gamma: Root) -> Root:
        if gamma.rank != self.rank or not self.is_root(gamma):
            raise NotARootError(f"{gamma} is not a root of {self.cartan_type}")
        return gamma

    def inner_product(self, x: Root, y: Root) -> int:
        return sum(
            x.coeffs[i] * self.gram[i][j] * y.coeffs[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if x.coeffs[i] and y.coeffs[j]
        )

    def squared_length(self, gamma: Root) -> int:
        return self.inner_product(gamma, gamma)

    def reflect(self, gamma: Root, i: int) -> Root:
        """Simple reflection s_i(gamma) = gamma - <gamma, delta_i> delta_i."""
        delta = Root.simple(i, self.rank)
        return gamma - _form_pairing(self.gram, gamma, delta) * delta

    def root_string(self, gamma2: Root, gamma1: Root) -> tuple[int, int]:
        """(u, v) with gamma2 + i*gamma1 a root exactly for -v <= i <= u."""
        self.require_root(gamma2)
        self.require_root(gamma1)
        if gamma2 == gamma1 or gamma2 == -gamma1:
            raise NotARootError(f"no root string of {gamma1} through {gamma2}: the roots are parallel")
        u = 0
        while self.is_root(gamma2 + (u + 1) * gamma1):
            u += 1
        v = 0
        while self.is_root(gamma2 - (v + 1) * gamma1):
            v += 1
        return u, v

    def pairing(self, gamma2: Root, gamma1: Root) -> int:
        """gamma2(H_gamma1), read off the root string for non-parallel roots."""
        self.require_root(gamma2)
        self.require_root(gamma1)
        if gamma2 == gamma1:
            return 2
        if gamma2 == -gamma1:
            return -2
        u, v = self.root_string(gamma2, gamma1)
        return v - u


def _form_pairing(gram, x: Root, y: Root) -> int:
    rank = len(gram)
    xy = sum(x.coeffs[i] * gram[i][j] * y.coeffs[j] for i in range(rank) for j in range(rank))
    yy = sum(y.coeffs[i] * gram[i][j] * y.coeffs[j] for i in range(rank) for j in range(rank))
    return 2 * xy // yy


@lru_cache(maxsize=None)
def build_root_system(ct: CartanType) -> RootSystem:
    gram = _gram_matrix(ct)
    simple = [Root.simple(i, ct.rank) for i in range(1, ct.rank + 1)]

    found = set(simple)
    frontier = list(simple)
    while frontier:
        gamma = frontier.pop()
        for delta in simple:
            image = gamma - _form_pairing(gram, gamma, delta) * delta
            if image not in found:
                found.add(image)
                frontier.append(image)

    roots = tuple(sorted(found, key=Root.sort_key))
    positive = tuple(r for r in roots if r.is_positive())
    if len(roots) != 2 * len(positive) or any(-r not in found for r in roots):
        raise InvalidCartanTypeError(f"reflection closure of {ct} is not a root system")
    cartan = tuple(tuple(_form_pairing(gram, a, b) for b in simple) for a in simple)
    logger.debug("built %s: %d roots, highest root %s", ct, len(roots), positive[-1])
    return RootSystem(
        cartan_type=ct,
        gram=tuple(tuple(row) for row in gram),
        cartan_matrix=cartan,
        roots=roots,
        positive_roots=positive,
        highest_root=positive[-1],
    )


class GeneratorKind(str, enum.Enum):
    NEG_ROOT = "NegRoot"
    TORUS = "Torus"
    POS_ROOT = "PosRoot"


@dataclass(frozen=True)
class GeneratorLabel:
    kind: GeneratorKind
    position: int
    root: Optional[Root] = None
    simple_index: Optional[int] = None

    @property
    def name(self) -> str:
        if self.kind is GeneratorKind.TORUS:
            return f"W{self.simple_index}"
        return f"V[{self.root}]"

    def __str__(self):
        return self.name


def generator_order(rs: RootSystem) -> list[GeneratorLabel]:
    """Negative roots by increasing signed height, then the torus, then positive roots."""
    labels = []
    for beta in rs.negative_roots:
        labels.append(GeneratorLabel(GeneratorKind.NEG_ROOT, len(labels), root=beta))
    for i in range(1, rs.rank + 1):
        labels.append(GeneratorLabel(GeneratorKind.TORUS, len(labels), simple_index=i))
    for alpha in rs.positive_roots:
        labels.append(GeneratorLabel(GeneratorKind.POS_ROOT, len(labels), root=alpha))
    return labels
