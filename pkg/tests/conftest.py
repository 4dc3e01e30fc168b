import pytest

from swl import AlphaMatrix, EXPONENTIAL, HAAR, Window


@pytest.fixture(scope="session")
def A_haar():
    return AlphaMatrix(HAAR)


@pytest.fixture(scope="session")
def A_exp():
    return AlphaMatrix(EXPONENTIAL)


@pytest.fixture(scope="session")
def w_haar():
    # deep scale ladder so truncation dust stays far below the tolerances
    return Window.symmetric(HAAR, 8, 10, 60)


@pytest.fixture(scope="session")
def w_exp():
    return Window.symmetric(EXPONENTIAL, 8, 6, 12)
