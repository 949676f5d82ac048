import random

import pytest

from cmfactors.eccurve import curve_table, get_curve


@pytest.fixture(scope="session")
def curve_d4():
    return get_curve("j1728-D4")


@pytest.fixture(scope="session")
def all_curves():
    return curve_table()


@pytest.fixture()
def rng():
    return random.Random(20240817)
