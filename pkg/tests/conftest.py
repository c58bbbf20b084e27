import numpy as np
import pytest

from coalsim import IncrementLaw, compute_renewal_weights


@pytest.fixture(scope="session")
def pp_law():
    return IncrementLaw.pure_power(0.39)


@pytest.fixture(scope="session")
def lp_law():
    return IncrementLaw.log_perturbed(0.3, 0.7)


@pytest.fixture(scope="session")
def mid_table(pp_law):
    return compute_renewal_weights(pp_law, 4096)


@pytest.fixture(scope="session")
def big_table(pp_law):
    return compute_renewal_weights(pp_law, 1 << 18)


@pytest.fixture(scope="session")
def lp_table(lp_law):
    return compute_renewal_weights(lp_law, 8192)


@pytest.fixture(scope="session")
def rng_np():
    return np.random.default_rng(20260816)
