import pytest

from drh.solution import solve_string, wk_potential


@pytest.fixture(scope="session")
def wk():
    return wk_potential(max_genus=2, max_degree=4, max_points=3)


@pytest.fixture(scope="session")
def kdv_solution(kdv_hierarchy):
    return solve_string(kdv_hierarchy, t_cap=2)
