import pytest

from gradedlie.algebra import load_preset


@pytest.fixture(scope="session")
def m0():
    return load_preset("m0", 16)


@pytest.fixture(scope="session")
def L1():
    return load_preset("L1", 16)


@pytest.fixture(scope="session")
def m0_big():
    return load_preset("m0", 22)
