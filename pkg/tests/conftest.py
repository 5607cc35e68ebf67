"""
Shared fixtures for crossed module actions and scenarios.
"""

from pathlib import Path

import pytest

from xmod.core import (
    b_group,
    complex_line,
    config_override,
    cyclic,
    direct_sum,
    from_normal_subgroup,
    group_algebra,
    matrix_algebra,
)
from xmod.core.testing.fixtures import s3_a3, z2_swap, z4_z2
from xmod.cstar import cm_action, function_algebra_action, groupoid_action, inner_action

TEST_DATA_FOLDER: Path = Path(__file__).parent.joinpath("data")

# pylint: disable=redefined-outer-name


@pytest.fixture(scope="session")
def test_data_dir():
    return TEST_DATA_FOLDER


@pytest.fixture(autouse=True)
def default_config():
    with config_override(tol_alg=1e-9, seed=0, max_dim=1024) as cfg:
        yield cfg


@pytest.fixture
def s3a3():
    return s3_a3()


@pytest.fixture
def z4z2():
    return z4_z2()


@pytest.fixture
def z2_trivial_h():
    """``Z2`` with the trivial subgroup."""
    return from_normal_subgroup(cyclic(2), [0])


@pytest.fixture
def z2_identity():
    """``(Z2, Z2, id)``."""
    return from_normal_subgroup(cyclic(2), [0, 1])


@pytest.fixture
def z3_identity():
    return from_normal_subgroup(cyclic(3), [0, 1, 2])


@pytest.fixture
def swap_c3(z2_trivial_h):
    """``Z2`` swapping the first two points of ``C0({1, 2, 3})``."""
    return function_algebra_action(z2_trivial_h, [1, 2, 3], {1: {1: 2, 2: 1, 3: 3}})


@pytest.fixture
def twisted_sum(z2_identity):
    """``C[Z2] ⊕ ℂ`` with ``u_1 = δ_1 ⊕ 1``."""
    B = direct_sum(group_algebra(cyclic(2)), complex_line(), objects=["*", "*"])
    return cm_action(z2_identity, B, None, {1: [0, 1, 1]})


@pytest.fixture
def diag_m2(z2_trivial_h):
    """``Z2`` acting on ``M2`` by ``Ad(diag(1, -1))``."""
    return inner_action(z2_trivial_h, matrix_algebra(2), {1: [1, 0, 0, -1]})


@pytest.fixture
def twisted_m2(z2_identity):
    """``(Z2, Z2, id)`` on ``M2`` with ``u_1 = diag(1, -1)``."""
    d = [1, 0, 0, -1]
    return inner_action(z2_identity, matrix_algebra(2), {1: d}, {1: d})


@pytest.fixture
def line_beta():
    """Trivial action of ``Z4`` on ``ℂ``."""
    return groupoid_action(cyclic(4), complex_line(), None)


@pytest.fixture
def swap_groupoid():
    return z2_swap(fixed=True)


@pytest.fixture
def sign_c2():
    """``b_group(Z2)`` on ``C0({1, 2})`` with ``u_1 = (1, -1)``."""
    return function_algebra_action(b_group(cyclic(2)), [1, 2], {}, {1: [1, -1]})
