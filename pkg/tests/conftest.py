import pytest

from cubiclines.lines27 import build_line_table
from cubiclines.weyl import full_group, generate_closure, induced_line_permutation

REMARK_IMAGES = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 0],
]


@pytest.fixture(scope="session")
def table():
    return build_line_table()


@pytest.fixture(scope="session")
def full():
    return full_group()


@pytest.fixture(scope="session")
def remark_group():
    """Cyclic order-3 action cycling E1 E2 E3 and E4 E5 E6; fixes no line."""
    return generate_closure([induced_line_permutation(REMARK_IMAGES)])
