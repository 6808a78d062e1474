import numpy as np
import pytest

from hyposym.curves import folded_tube_curve
from hyposym.surfaces import corpus

H = 0.01


@pytest.fixture(scope="session")
def sphere():
    return corpus("sphere", h=H)


@pytest.fixture(scope="session")
def torus():
    return corpus("torus", h=H)


@pytest.fixture(scope="session")
def ellipsoid():
    return corpus("ellipsoid", h=H)


@pytest.fixture(scope="session")
def perturbed():
    return corpus("perturbed_sphere", h=H)


@pytest.fixture(scope="session")
def hairpin():
    return folded_tube_curve()


@pytest.fixture(scope="session")
def disk_region(sphere):
    return sphere.region


@pytest.fixture(scope="session")
def annulus_region(torus):
    return torus.region


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
