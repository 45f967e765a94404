import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "suite", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

from ccdimer.potentials import builtin_model_curves  # noqa: E402
from ccdimer.species import load_species, reduced_mass  # noqa: E402


@pytest.fixture(scope="session")
def species():
    return load_species()


@pytest.fixture(scope="session")
def ka(species):
    return species["K40"]


@pytest.fixture(scope="session")
def rb(species):
    return species["Rb87"]


@pytest.fixture(scope="session")
def mu_kr(ka, rb):
    return reduced_mass(ka.mass_au, rb.mass_au)


@pytest.fixture(scope="session")
def curves():
    return builtin_model_curves()
