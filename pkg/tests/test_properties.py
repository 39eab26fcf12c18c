"""Randomized structural properties over generated games."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from cursedgames import (
    belief_trajectory,
    check_phc,
    parse_game,
    scramble,
    serialize_game,
)
from cursedgames.cli import parse_profile_shorthand, profile_shorthand
from cursedgames.game import conditional_prior
from gamegen import random_game, random_profile

CHIS = (0, Fraction(1, 4), Fraction(2, 3), 1)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_belief_rows_stay_normalized(seed):
    rng = random.Random(seed)
    game = random_game(rng)
    sigma = random_profile(rng, game)
    chi = rng.choice(CHIS)
    player = rng.randrange(game.n)
    own = rng.choice(game.type_sets[player])
    for h in game.histories(game.horizon - 1):
        for row in belief_trajectory(game, sigma, chi, player, own, h):
            assert sum(row.values()) == 1
            assert all(p >= 0 for p in row.values())


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_serialization_round_trips(seed):
    game = random_game(random.Random(seed))
    text = serialize_game(game)
    assert serialize_game(parse_game(text)) == text


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_scramble_restores_history_condition(seed):
    game = random_game(random.Random(seed))
    assert check_phc(scramble(game))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_shorthand_round_trips_on_pure_profiles(seed):
    rng = random.Random(seed)
    game = random_game(rng)
    sigma = random_profile(rng, game, pure=True)
    text = profile_shorthand(game, sigma)
    again = parse_profile_shorthand(game, text)
    assert again == sigma


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_root_belief_is_conditional_prior(seed):
    rng = random.Random(seed)
    game = random_game(rng)
    sigma = random_profile(rng, game)
    for player in range(game.n):
        for own in game.type_sets[player]:
            walk = belief_trajectory(
                game, sigma, Fraction(1, 2), player, own,
                game.histories(0)[0],
            )
            assert walk[0] == conditional_prior(game, player, own)
