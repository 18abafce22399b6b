import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from freecover.words import Endomorphism, reduce

GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def letters(rank):
    return st.integers(-rank, rank).filter(bool)


def words(rank=2, max_size=8, min_size=0):
    """Reduced words built from raw letter lists, so lengths vary after cancellation."""
    return st.lists(letters(rank), min_size=min_size, max_size=max_size).map(lambda ls: reduce(ls, rank))


def endomorphisms(rank=2, max_size=5):
    return st.lists(words(rank, max_size), min_size=rank, max_size=rank).map(
        lambda ws: Endomorphism(tuple(ws)))


def load_golden(name):
    return json.loads((GOLDEN / name).read_text())


@pytest.fixture
def golden():
    return load_golden
