import numpy as np
import pytest

import helpers

CASE1_CONFIGS = [(1, 0, 1), (2, 1, 1), (2, 1, 2), (3, 1, 2), (3, 2, 1)]
CASE2_CONFIGS = [(1, 0, 2), (2, 1, 1), (2, 1, 2), (3, 1, 2), (3, 2, 2), (2, 0, 2)]


@pytest.fixture(scope="session")
def case1_bank():
    """Twenty certified regulated-configuration canonical models."""
    rng = np.random.default_rng(20240901)
    return [
        helpers.random_case1_canonical(rng, *CASE1_CONFIGS[i % len(CASE1_CONFIGS)])
        for i in range(20)
    ]


@pytest.fixture(scope="session")
def case2_bank():
    """Twenty certified kinked-configuration canonical models."""
    rng = np.random.default_rng(20240902)
    return [
        helpers.random_case2_canonical(rng, *CASE2_CONFIGS[i % len(CASE2_CONFIGS)])
        for i in range(20)
    ]
