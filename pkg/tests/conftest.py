import pytest

from bilinear_blowup.bumps import make_phi, make_phi_tilde


@pytest.fixture(scope="session")
def phi1():
    return make_phi(1)


@pytest.fixture(scope="session")
def phi_tilde1():
    return make_phi_tilde(1)
