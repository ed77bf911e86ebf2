"""Shared test configuration.

Seeded randomness: the PLASTI_SEED environment variable fixes the seed
used by every randomized suite (and keeps reruns reproducible when it is
unset, via a fixed default). Hypothesis runs under a profile with the
deadline disabled because exact rational arithmetic has occasional slow
examples on deep fractions, which are fine but trip wall-clock limits.
"""

import os
import random

import pytest
from hypothesis import HealthCheck, settings

DEFAULT_SEED = 20250819

settings.register_profile(
    "plasti",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("plasti")


def seed_value() -> int:
    return int(os.environ.get("PLASTI_SEED", DEFAULT_SEED))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(seed_value())
