import pytest
from hypothesis import HealthCheck, settings

from birweyl.poisson import preset

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

RANK2 = ("2A1", "A2", "B2", "G2")


@pytest.fixture(scope="session")
def presets():
    return {name: preset(name) for name in RANK2 + ("A2(1)",)}


@pytest.fixture(scope="session")
def a2(presets):
    return presets["A2"]


@pytest.fixture(scope="session")
def b2(presets):
    return presets["B2"]


@pytest.fixture(scope="session")
def g2(presets):
    return presets["G2"]
