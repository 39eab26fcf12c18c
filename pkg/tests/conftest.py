from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cursedgames import (
    matching_game,
    perfect_info_game,
    signaling_game,
    signaling_profile,
)


@pytest.fixture(scope="session")
def signaling():
    return signaling_game()


@pytest.fixture(scope="session")
def signaling_scrambled():
    return signaling_game(scrambled=True)


@pytest.fixture(scope="session")
def perfect_info():
    return perfect_info_game()


@pytest.fixture(scope="session")
def matching_tenth():
    return matching_game(Fraction(1, 10))


@pytest.fixture
def pool_a(signaling):
    return signaling_profile(signaling, ("A", "A"), ("L", "R"))


@pytest.fixture
def pool_b_rr(signaling):
    return signaling_profile(signaling, ("B", "B"), ("R", "R"))
