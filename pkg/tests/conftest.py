import numpy as np
import pytest

from hardyfrac import ProblemParams


@pytest.fixture(scope="session")
def p25():
    return ProblemParams(2, 0.5, 0.0)


@pytest.fixture(scope="session")
def p375():
    return ProblemParams(3, 0.75, 0.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
