import pytest

from trailcalc.enumeration import enumerate_bang_rooted, enumerate_codes
from trailcalc.trails import term_of_code


@pytest.fixture(scope="session")
def codes6():
    return enumerate_codes(6)


@pytest.fixture(scope="session")
def codes7():
    return enumerate_codes(7)


@pytest.fixture(scope="session")
def bang_terms7():
    return [(term_of_code(c), ty) for c, ty in enumerate_bang_rooted(7)]


@pytest.fixture(scope="session")
def bang_terms9():
    return [(term_of_code(c), ty) for c, ty in enumerate_bang_rooted(9)]
