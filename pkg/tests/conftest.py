import pytest

from dforms.scalars import F2T, QQ
from dforms.algebra import quat_create


@pytest.fixture(scope="session")
def H():
    """Rational Hamilton quaternions (-1,-1)."""
    return quat_create(QQ, -1, -1)


@pytest.fixture(scope="session")
def D25():
    """(2,5)/Q, division by a Hilbert symbol at 5."""
    return quat_create(QQ, 2, 5)


@pytest.fixture(scope="session")
def SPLIT11():
    return quat_create(QQ, 1, 1)


@pytest.fixture(scope="session")
def C2D():
    """[1,t) over F2(t): certified division in characteristic 2."""
    return quat_create(F2T, 1, F2T.t)


@pytest.fixture(scope="session")
def C2TT():
    """[t,t) over F2(t): splits (1+u+v is a zero divisor)."""
    return quat_create(F2T, F2T.t, F2T.t)
