"""Property suites run by `verify`: each returns one CheckResult per suite or per instance."""

import itertools
import logging
import random
import time
from typing import Callable

from chevalley_iwasawa import schemas
from chevalley_iwasawa.errors import IwasawaError, PrecisionError
from chevalley_iwasawa.group_model import (
    MatrixRealization,
    min_valuation,
    valuation_axiom_failures,
    verify_steinberg,
)
from chevalley_iwasawa.iwasawa import (
    TruncatedIwasawaAlgebra,
    check_relations,
    graded_dimension_formula,
)
from chevalley_iwasawa.padic import AtLeast, PAdic, constants_PQ
from chevalley_iwasawa.root_system import CartanType

logger = logging.getLogger(__name__)


def _suite(name: str, body: Callable[[], list[str]]) -> schemas.CheckResult:
    """Run a suite returning a list of failure descriptions."""
    start = time.perf_counter()
    try:
        failures = body()
    except IwasawaError as e:
        failures = [f"{type(e).__name__}: {e}"]
    seconds = time.perf_counter() - start
    logger.info("suite %s: %d failures in %.2fs", name, len(failures), seconds)
    detail = "; ".join(failures[:3]) + (f" (+{len(failures) - 3} more)" if len(failures) > 3 else "")
    return schemas.CheckResult(name=name, passed=not failures, detail=detail or None, seconds=seconds)


def _shift(v, k: int = 1):
    return AtLeast(v.bound + k) if isinstance(v, AtLeast) else v + k


def sl2_constants(model: MatrixRealization) -> list[str]:
    """x_d(p) x_-d(p) = x_-d(pQ) h_d(1+p^2) x_d(pQ) for every simple root d, torus exponent P."""
    p, M = model.p, model.precision
    Q = PAdic(p, M, 1 + p * p).inverse()
    P = constants_PQ(p, model.exponent_precision).P
    failures = []
    for i, delta in enumerate(model.rs.simple_roots, start=1):
        g = model.x_elem(delta, p) * model.x_elem(-delta, p)
        params = model.triangular_decompose(g)
        expected_u = {beta: Q * p if beta == -delta else PAdic(p, M, 0) for beta in params.u}
        expected_w = {alpha: Q * p if alpha == delta else PAdic(p, M, 0) for alpha in params.w}
        expected_v = {k: PAdic(p, M, p * p if k == i else 0) for k in params.v}
        if params.u != expected_u or params.w != expected_w or params.v != expected_v:
            failures.append(f"decomposition of x({delta})(p) x({-delta})(p)")
        e = model.lazard_coordinates(g)
        torus = next(lab.position for lab in model.labels if lab.simple_index == i)
        if e.e[torus] != P:
            failures.append(f"torus exponent {e.e[torus]} != P = {P}")
    if not P.agrees_with(p, 2) or not PAdic(p, 2, Q.residue) == 1:
        failures.append("P = p and Q = 1 mod p^2 fail")
    return failures


def valuation_laws(model: MatrixRealization, rng: random.Random, samples: int) -> list[str]:
    failures = []
    for _ in range(samples):
        g = model.random_element(rng, rng.randint(1, 2))
        h = model.random_element(rng, rng.randint(1, 2))
        for axiom in valuation_axiom_failures(model, g, h):
            failures.append(f"{axiom} at\n{g}")
        omega = model.omega(g)
        params = model.triangular_decompose(g)
        by_params = min_valuation([a.val() for a in params.values()])
        if not isinstance(omega, AtLeast) and by_params != omega:
            failures.append(f"omega {omega} != min valuation of parameters {by_params}")
    return failures


def ordered_basis_law(model: MatrixRealization, rng: random.Random, samples: int) -> list[str]:
    """omega(prod g_i^{x_i}) = min(1 + val x_i) for exponents of random valuation."""
    p, E = model.p, model.exponent_precision
    failures = []
    for _ in range(samples):
        e = [PAdic(p, E, rng.randrange(p**E) * p ** rng.randint(0, 3)) for _ in model.labels]
        expected = min_valuation([_shift(a.val()) for a in e])
        got = model.omega(model.from_coordinates(e))
        if not isinstance(expected, AtLeast) and got != expected:
            failures.append(f"omega {got} != {expected} for exponents {[str(a) for a in e]}")
        if model.lazard_coordinates(model.from_coordinates(e)).e != tuple(e):
            failures.append("coordinates do not round trip")
    return failures


def level_two_cosets(model: MatrixRealization) -> list[str]:
    """The p^d coordinate tuples mod p give p^d distinct classes in G(1)/G(2)."""
    d, p = len(model.labels), model.p
    keys = {model.coset_key(model.from_coordinates(e), 2) for e in itertools.product(range(p), repeat=d)}
    if len(keys) != p**d:
        return [f"{len(keys)} distinct cosets, expected {p ** d}"]
    return []


def level_two_dirac_classes(algebra: TruncatedIwasawaAlgebra) -> list[str]:
    """The p^d representatives of G(1)/G(2) have pairwise distinct Dirac series in degrees <= 1."""
    model = algebra.model
    d, p = algebra.d, algebra.p
    if algebra.degree < 2:
        raise PrecisionError("degree-one terms need N >= 2", required=2)
    seen = {}
    failures = []
    for e in itertools.product(range(p), repeat=d):
        series = algebra.dirac(model.from_coordinates(e))
        key = tuple(sorted((n, c.residue) for n, c in series.coefficients.items() if sum(n) <= 1))
        if key in seen:
            failures.append(f"coordinates {seen[key]} and {e} share their degree <= 1 part")
        seen.setdefault(key, e)
    return failures


def homomorphism(algebra: TruncatedIwasawaAlgebra, rng: random.Random, samples: int) -> list[str]:
    model = algebra.model
    failures = []
    for _ in range(samples):
        g, h = model.random_element(rng), model.random_element(rng)
        if algebra.dirac(g * h) != algebra.convolve(algebra.dirac(g), algebra.dirac(h)):
            failures.append(f"dirac(gh) != dirac(g)*dirac(h) for\n{g}\n{h}")
    return failures


def dirac_valuation(algebra: TruncatedIwasawaAlgebra, rng: random.Random, samples: int) -> list[str]:
    """omega~(dirac(g) - 1) = omega(g) for omega(g) <= min(m, N) and omega(g) < N."""
    model = algebra.model
    cap = min(algebra.precision, algebra.degree)
    failures = []
    for _ in range(samples):
        g = model.random_element(rng, rng.randint(1, cap))
        omega = model.omega(g)
        got = algebra.omega_tilde(algebra.dirac(g) - algebra.one())
        if not isinstance(omega, AtLeast) and omega <= cap and omega < algebra.degree and got != omega:
            failures.append(f"omega~ {got} != omega {omega}")
    return failures


def random_monomial_series(algebra: TruncatedIwasawaAlgebra, rng: random.Random, budget: int, min_degree: int = 0):
    """c * b^n with val(c) + |n| = budget; returns the series and its omega~."""
    degree = rng.randint(min(min_degree, budget), budget)
    letters = [rng.randrange(algebra.d) for _ in range(degree)]
    n = [0] * algebra.d
    for i in letters:
        n[i] += 1
    unit = rng.randrange(1, algebra.p)
    return algebra.monomial(tuple(n), unit * algebra.p ** (budget - degree)), budget


def omega_tilde_additivity(algebra: TruncatedIwasawaAlgebra, rng: random.Random, samples: int) -> list[str]:
    cap = min(algebra.precision, algebra.degree)
    # the cap itself is reachable only when m < N
    top = cap if algebra.precision < algebra.degree else cap - 1
    failures = []
    for _ in range(samples):
        total = rng.randint(0, top)
        # a product at the cap is only stored when it has positive degree
        at_cap = total == cap
        left = rng.randint(int(at_cap), total)
        a, wa = random_monomial_series(algebra, rng, left, min_degree=int(at_cap))
        b, wb = random_monomial_series(algebra, rng, total - left)
        got = algebra.omega_tilde(algebra.convolve(a, b))
        if got != wa + wb:
            failures.append(f"omega~({a} * {b}) = {got}, expected {wa + wb}")
    return failures


def graded_words(algebra: TruncatedIwasawaAlgebra, rng: random.Random, samples: int, max_degree: int = 4):
    top = min(max_degree, algebra.degree - 1)
    exhaustive = sum(algebra.d**k for k in range(top + 1))
    if exhaustive <= max(samples, 200):
        for k in range(top + 1):
            yield from itertools.product(range(algebra.d), repeat=k)
        return
    for _ in range(samples):
        yield tuple(rng.randrange(algebra.d) for _ in range(rng.randint(1, top)))


def graded_structure(algebra: TruncatedIwasawaAlgebra, rng: random.Random, samples: int) -> list[str]:
    failures = []
    for word in graded_words(algebra, rng, samples):
        result = algebra.graded_leading_term_check(word)
        if not result.passed:
            failures.append(f"{result.name}: {result.detail}")
    for n in range(algebra.degree):
        count = algebra.graded_dimension_count(n)
        if count != graded_dimension_formula(n, algebra.d):
            failures.append(f"degree {n}: {count} ordered monomials")
    return failures


def run_verify(
    cartan_type: CartanType, p: int, degree: int, precision: int, seed: int, samples: int = 20
) -> schemas.VerifyReport:
    """Every relation instance plus the property suites, for a type with a matrix realization."""
    algebra = TruncatedIwasawaAlgebra.build(cartan_type, p, degree, precision)
    model = algebra.model
    rng = random.Random(seed)
    results = []
    results.extend(check_relations(algebra))
    results.extend(verify_steinberg(model))
    results.append(_suite("sl2_constants", lambda: sl2_constants(model)))
    results.append(_suite("valuation_laws", lambda: valuation_laws(model, rng, samples)))
    results.append(_suite("ordered_basis_law", lambda: ordered_basis_law(model, rng, samples)))
    if p ** len(model.labels) <= 10**4:
        results.append(_suite("level_two_cosets", lambda: level_two_cosets(model)))
        if degree >= 2:
            results.append(_suite("level_two_dirac_classes", lambda: level_two_dirac_classes(algebra)))
    results.append(_suite("homomorphism", lambda: homomorphism(algebra, rng, samples)))
    results.append(_suite("dirac_valuation", lambda: dirac_valuation(algebra, rng, samples)))
    results.append(_suite("omega_tilde_additivity", lambda: omega_tilde_additivity(algebra, rng, samples)))
    results.append(_suite("graded_structure", lambda: graded_structure(algebra, rng, samples)))
    return schemas.VerifyReport(
        cartan_type=str(cartan_type),
        prime=p,
        degree=degree,
        precision=precision,
        group_precision=model.precision,
        seed=seed,
        results=results,
    )
