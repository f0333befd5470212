"""Shared fixtures: precision contexts and standard parameter grids."""
import pytest

from wigdet import precision_bits

# Cross-route verification grid: spectral points on both sides of the bulk
# edge plus zero, and fourth moments at the Jensen floor, the gaussian value,
# and a heavy value.
MU_VALUES = ("-1.1", "0", "0.4")
NU_VALUES = ("-0.7", "0", "2")
B_VALUES = ("1/4", "3/4", "3")


@pytest.fixture
def bits53():
    with precision_bits(53):
        yield 53


@pytest.fixture
def bits128():
    with precision_bits(128):
        yield 128


@pytest.fixture
def bits256():
    with precision_bits(256):
        yield 256


@pytest.fixture(params=(53, 128, 256))
def every_precision(request):
    with precision_bits(request.param):
        yield request.param
