import numpy as np
import pytest

from lie2int.catalog import BUILTIN_ALGEBRAS, builtin_crossed_module, so3


@pytest.fixture(scope="session")
def crossed_modules():
    return {name: builtin_crossed_module(name) for name in BUILTIN_ALGEBRAS}


@pytest.fixture(scope="session")
def so3_cm():
    return builtin_crossed_module("so3")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def so3_algebra():
    return so3()
