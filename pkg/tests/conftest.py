import random

import pytest

from chevalley_iwasawa.group_model import MatrixRealization
from chevalley_iwasawa.iwasawa import TruncatedIwasawaAlgebra
from chevalley_iwasawa.root_system import CartanType, build_root_system


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(scope="session")
def a1():
    return build_root_system(CartanType("A", 1))


@pytest.fixture(scope="session")
def a2():
    return build_root_system(CartanType("A", 2))


@pytest.fixture(scope="session")
def a3():
    return build_root_system(CartanType("A", 3))


@pytest.fixture(scope="session")
def g2():
    return build_root_system(CartanType("G", 2))


@pytest.fixture(scope="session")
def a1_model(a1):
    return MatrixRealization(a1, 5, 6)


@pytest.fixture(scope="session")
def a2_model(a2):
    return MatrixRealization(a2, 5, 4)


@pytest.fixture(scope="session")
def a1_algebra():
    """N = 5, m = 4 over p = 5."""
    return TruncatedIwasawaAlgebra.build(CartanType("A", 1), 5, 5, 4)


@pytest.fixture(scope="session")
def a2_algebra():
    """N = 4, m = 3 over p = 3."""
    return TruncatedIwasawaAlgebra.build(CartanType("A", 2), 3, 4, 3)
