import pytest

from evfuse import Frame, Model

from support import ROWS_M1, ROWS_M2, ROWS_M3, ROWS_M4, mass_from_rows


@pytest.fixture
def frame():
    return Frame(("A", "B", "C"))


@pytest.fixture
def exclusive(frame):
    return Model.exclusive(frame)


@pytest.fixture
def free(frame):
    return Model.free(frame)


@pytest.fixture
def m1(exclusive):
    return mass_from_rows(exclusive, ROWS_M1)


@pytest.fixture
def m2(exclusive):
    return mass_from_rows(exclusive, ROWS_M2)


@pytest.fixture
def m3(exclusive):
    return mass_from_rows(exclusive, ROWS_M3)


@pytest.fixture
def m4(exclusive):
    return mass_from_rows(exclusive, ROWS_M4)
