import pytest
from hypothesis import HealthCheck, settings

from comptile.acceptance import corpus as _corpus

settings.register_profile(
    "suite", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


@pytest.fixture(scope="session")
def corpus():
    return _corpus()
