import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polyauto.fields import Field


@pytest.fixture(scope="session")
def Q():
    return Field.rationals()


@pytest.fixture(scope="session")
def F2():
    return Field.prime(2)


@pytest.fixture(scope="session")
def F3():
    return Field.prime(3)


@pytest.fixture(scope="session")
def F5():
    return Field.prime(5)


@pytest.fixture(scope="session")
def F4():
    return Field.of_order(4)


@pytest.fixture(scope="session")
def F8():
    return Field.of_order(8)


@pytest.fixture(scope="session")
def F9():
    return Field.of_order(9)
