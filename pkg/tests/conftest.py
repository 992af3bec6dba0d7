import random

import pytest

from logdiam.matmod import (
    standard_product_genset,
    standard_sa2_genset,
    standard_sl2_genset,
)
from logdiam.modarith import factorize


@pytest.fixture(scope="session")
def sl2():
    return standard_sl2_genset()


@pytest.fixture(scope="session")
def sa2():
    return standard_sa2_genset()


@pytest.fixture(scope="session")
def prod2():
    return standard_product_genset()


@pytest.fixture(scope="session")
def fm35():
    return factorize(3**5).with_level(2)


@pytest.fixture(scope="session")
def fm37():
    return factorize(3**7).with_level(2)


@pytest.fixture
def rng():
    return random.Random(0xD15C0)
