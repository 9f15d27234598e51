import pytest
from hypothesis import HealthCheck, settings

from lingdecide.scale import LinguisticScale

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def scale():
    return LinguisticScale(4, 4)


@pytest.fixture
def small_scale():
    return LinguisticScale(3, 2)
