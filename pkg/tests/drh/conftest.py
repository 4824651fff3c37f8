import os

import pytest
from hypothesis import HealthCheck, settings

from drh.catalog.builtins import kdv, r_spin
from drh.models.caps import ComputationCaps

# DRH_HYPOTHESIS_PROFILE=thorough roda as propriedades algébricas com 10³ casos
settings.register_profile("default", max_examples=50, derandomize=True, deadline=None)
settings.register_profile(
    "thorough",
    max_examples=1000,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("DRH_HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def kdv_spec():
    return kdv(ComputationCaps(eps_cap=2, u_degree_cap=6, p_max=2))


@pytest.fixture(scope="session")
def kdv_hierarchy(kdv_spec):
    return kdv_spec.hierarchy()


@pytest.fixture(scope="session")
def three_spin():
    return r_spin(3, ComputationCaps(eps_cap=2, u_degree_cap=5, p_max=1))
