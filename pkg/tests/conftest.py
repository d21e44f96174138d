import pytest

from ppzcsp.formula import parse

EXAMPLE_TEXT = "p csp 3 3 2\n1!=2 2!=1 0\n1!=3 3!=1 0\n"


@pytest.fixture
def example():
    """(x != 2 v y != 1) & (x != 3 v z != 1) over d = 3 with x, y, z = 1, 2, 3."""
    return parse(EXAMPLE_TEXT)
