import math

import numpy as np
import pytest

from condorcet import Culture
from condorcet.culture import _dual_permutation


def random_culture(rng: np.random.Generator, m: int = 3) -> Culture:
    return Culture(m, rng.dirichlet(np.ones(math.factorial(m))))


def random_dual_culture(rng: np.random.Generator, m: int = 3) -> Culture:
    q = rng.dirichlet(np.ones(math.factorial(m)))
    dual = np.array(_dual_permutation(m))
    return Culture(m, (q + q[dual]) / 2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1729)
