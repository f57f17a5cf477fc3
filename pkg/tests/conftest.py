import pytest

from luroth.surface import new_surface
from luroth.verify import STANDARD_BETA

# a second admissible surface on which no special coincidences were observed
GENERIC_BETA = (2, -5, 7, 11, -3, 9)


@pytest.fixture(scope="session")
def standard_surface():
    return new_surface(STANDARD_BETA)


@pytest.fixture(scope="session")
def generic_surface():
    return new_surface(GENERIC_BETA)
