"""
Shared pytest fixtures: the running-example models and a seeded random corpus
"""
from pathlib import Path

import pytest

from lcm_indist.analysis.ioeq import ioeq_forests
from lcm_indist.config import settings
from lcm_indist.core.graph_model import Model, make_cycle_model, make_path_leak_model, random_models

SAMPLE_DATA = Path(__file__).parent / "sample_data"


@pytest.fixture
def sample_path():
    def _path(name: str) -> Path:
        return SAMPLE_DATA / name
    return _path


@pytest.fixture
def m3() -> Model:
    """Path 1 -> 2 -> 3 -> 4 with a leak at 3"""
    return make_path_leak_model(4, 3)


@pytest.fixture
def m4() -> Model:
    """Path 1 -> 2 -> 3 -> 4 closed by 4 -> 3, no leaks"""
    return make_cycle_model(4)


@pytest.fixture
def m2() -> Model:
    return make_path_leak_model(4, 2)


@pytest.fixture
def leak_at_output() -> Model:
    return make_path_leak_model(4, 4)


@pytest.fixture
def feedback_model() -> Model:
    """Strongly connected 4-compartment graph with two back-edges and a leak"""
    return Model(n=4, edges=[(1, 2), (2, 1), (2, 3), (3, 4), (4, 2)], input=1, output=3, leaks=[4])


@pytest.fixture
def eq_m3(m3):
    return ioeq_forests(m3)


@pytest.fixture
def eq_m4(m4):
    return ioeq_forests(m4)


@pytest.fixture(scope="session")
def random_corpus():
    return random_models(50, seed=settings.RANDOM_SEED, max_n=6, max_edges=12)
