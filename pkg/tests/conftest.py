import pytest

from qmeixner import ProcessParams


@pytest.fixture
def params():
    return ProcessParams(0.5, 0.3, 0.2)


PARAM_GRID = [
    ProcessParams(q, theta, tau)
    for q in (-0.5, 0.0, 0.3, 0.7)
    for theta in (0.0, 0.3)
    for tau in (0.0, 0.2)
]
