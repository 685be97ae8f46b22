import pytest
from hypothesis import HealthCheck, settings

from .corpus import square

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def sq():
    return square()
