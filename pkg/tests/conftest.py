"""
Shared pytest fixtures and configuration.
"""
import random

import pytest

from algebra.polyring import polynomial_ring
from knots.braid_model import parse_braid
from services.observability import observability_service

# name -> (braid text, strands)
CORPUS = {
    "unknot": ("", 1),
    "unknot_kink": ("1", 2),
    "hopf": ("1 1", 2),
    "trefoil": ("1 1 1", 2),
    "trefoil_stabilised": ("1 1 1 2", 3),
    "figure_eight": ("1 -2 1 -2", 3),
    "unlink": ("", 2),
}


@pytest.fixture(scope="session")
def corpus():
    """Parsed braid words of the small test corpus."""
    return {name: parse_braid(text, strands) for name, (text, strands) in CORPUS.items()}


@pytest.fixture
def unknot(corpus):
    return corpus["unknot"]


@pytest.fixture
def trefoil(corpus):
    return corpus["trefoil"]


@pytest.fixture
def hopf(corpus):
    return corpus["hopf"]


@pytest.fixture
def figure_eight(corpus):
    return corpus["figure_eight"]


@pytest.fixture
def rng():
    """Seeded generator so randomised suites are reproducible."""
    return random.Random(20240611)


@pytest.fixture
def ring3():
    """ZZ[x0, x1, x2]"""
    return polynomial_ring([0, 1, 2])


@pytest.fixture(autouse=True)
def reset_observability():
    """Clear in-process counters between tests."""
    observability_service.reset()
    yield
    observability_service.reset()


@pytest.fixture
def random_braid(rng):
    """Factory of random braid words with generators 1..strands-1."""
    def build(strands: int, length: int):
        letters = []
        for _ in range(length):
            index = rng.randint(1, strands - 1)
            letters.append(str(index if rng.random() < 0.5 else -index))
        return parse_braid(" ".join(letters), strands)
    return build
