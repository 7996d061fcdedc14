import pytest

from fracorlicz.domain import Domain
from fracorlicz.nfunction import NFunction


@pytest.fixture(scope="session")
def unit65():
    """65-node unit interval with the default one-diameter halo."""
    return Domain(((0.0, 1.0),), (65,))


@pytest.fixture(scope="session")
def power2():
    return NFunction.power(2.0)
