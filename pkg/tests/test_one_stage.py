"""One-shot concepts: objectives, best-reply checks, pure enumeration."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cursedgames import (
    ROOT,
    UNTYPED,
    BehavioralStrategyProfile,
    CombinatorialLimitExceeded,
    NotOneStage,
    ce_objective,
    check_ce,
    check_cse,
    check_ice,
    check_sce,
    enumerate_pure,
    ice_objective,
    matching_game,
    matching_profile,
)
from gamegen import random_game, random_profile

HALF = Fraction(1, 2)


class TestObjectives:
    def test_judge_values_fully_cursed(self, matching_tenth):
        sigma = matching_profile(matching_tenth, judge="b")
        b = ce_objective(matching_tenth, sigma, 1, 2, UNTYPED, "b")
        m = ce_objective(matching_tenth, sigma, 1, 2, UNTYPED, "m")
        # matches carry prior weight 4/5: betting pays 1/2 * 4/5
        assert b == Fraction(2, 5)
        assert m == Fraction(1, 5)

    def test_judge_values_independent(self, matching_tenth):
        sigma = matching_profile(matching_tenth, judge="b")
        b = ice_objective(matching_tenth, sigma, 2, UNTYPED, "b")
        m = ice_objective(matching_tenth, sigma, 2, UNTYPED, "m")
        # independent pooling drops the correlation: match chance 1/2
        assert b == Fraction(1, 4)
        assert m == Fraction(1, 2)

    def test_chi_zero_is_true_expectation(self, matching_tenth):
        sigma = matching_profile(matching_tenth, judge="m")
        m = ce_objective(matching_tenth, sigma, 0, 2, UNTYPED, "m")
        assert m == Fraction(1, 5)

    def test_indifference_at_one_sixth(self):
        game = matching_game(Fraction(1, 6))
        sigma = matching_profile(game, judge="b")
        b = ce_objective(game, sigma, 1, 2, UNTYPED, "b")
        m = ce_objective(game, sigma, 1, 2, UNTYPED, "m")
        assert b == m == Fraction(1, 3)


class TestVerdicts:
    def test_fully_cursed_judge_bets_at_small_epsilon(self, matching_tenth):
        bet = matching_profile(matching_tenth, judge="b")
        mismatch = matching_profile(matching_tenth, judge="m")
        assert check_ce(matching_tenth, bet, 1).is_equilibrium
        assert not check_ce(matching_tenth, mismatch, 1).is_equilibrium

    def test_fully_cursed_judge_flips_at_large_epsilon(self):
        game = matching_game(Fraction(1, 5))
        bet = matching_profile(game, judge="b")
        mismatch = matching_profile(game, judge="m")
        assert not check_ce(game, bet, 1).is_equilibrium
        assert check_ce(game, mismatch, 1).is_equilibrium

    def test_both_pass_at_the_knife_edge(self):
        game = matching_game(Fraction(1, 6))
        for judge in ("b", "m"):
            sigma = matching_profile(game, judge=judge)
            assert check_ce(game, sigma, 1).is_equilibrium

    def test_independent_judge_always_mismatches(self, matching_tenth):
        bet = matching_profile(matching_tenth, judge="b")
        mismatch = matching_profile(matching_tenth, judge="m")
        assert check_ice(matching_tenth, mismatch).is_equilibrium
        assert not check_ice(matching_tenth, bet).is_equilibrium

    def test_truthful_announcers_required(self, matching_tenth):
        sigma = matching_profile(matching_tenth, judge="b")
        lying = sigma.with_action(0, "h", ROOT, "t")
        assert not check_ce(matching_tenth, lying, 1).is_equilibrium
        assert not check_ice(matching_tenth, lying).is_equilibrium


class TestEnumeration:
    def test_pure_profile_count(self, matching_tenth):
        profiles = list(enumerate_pure(matching_tenth))
        # two typed announcers (2 actions ^ 2 types) and an untyped judge
        assert len(profiles) == 4 * 4 * 2

    def test_predicate_filters(self, matching_tenth):
        eqs = list(enumerate_pure(
            matching_tenth,
            predicate=lambda s: check_ice(matching_tenth, s).is_equilibrium,
        ))
        assert len(eqs) == 1
        sigma = eqs[0]
        assert sigma.support(2, UNTYPED, ROOT) == ["m"]
        assert sigma.support(0, "h", ROOT) == ["h"]
        assert sigma.support(1, "t", ROOT) == ["t"]

    def test_limit_guard(self, matching_tenth):
        with pytest.raises(CombinatorialLimitExceeded):
            list(enumerate_pure(matching_tenth, limit=5))

    def test_multi_stage_games_allowed(self, signaling):
        profiles = list(enumerate_pure(signaling))
        assert len(profiles) == 16


class TestOneStageGuard:
    def test_checks_reject_longer_games(self, signaling, pool_a):
        with pytest.raises(NotOneStage):
            check_ce(signaling, pool_a, HALF)
        with pytest.raises(NotOneStage):
            check_ice(signaling, pool_a)
        with pytest.raises(NotOneStage):
            ce_objective(signaling, pool_a, HALF, 0, "t1", "A")

    def test_chi_validation(self, matching_tenth):
        sigma = matching_profile(matching_tenth, judge="b")
        with pytest.raises(ValueError):
            check_ce(matching_tenth, sigma, 2)


class TestReductions:
    def test_single_stage_dampened_check_matches_ce(self):
        rng = random.Random(31)
        for _ in range(10):
            game = random_game(rng, max_horizon=1)
            sigma = random_profile(rng, game, pure=rng.random() < 0.5)
            chi = rng.choice((0, HALF, 1))
            a = check_cse(game, sigma, chi).is_equilibrium
            b = check_ce(game, sigma, chi).is_equilibrium
            assert a is b

    def test_single_stage_conjecture_check_matches_ice(self):
        rng = random.Random(37)
        for _ in range(10):
            game = random_game(rng, max_horizon=1)
            sigma = random_profile(rng, game, pure=rng.random() < 0.5)
            a = check_sce(game, sigma, 1, 1).is_equilibrium
            b = check_ice(game, sigma).is_equilibrium
            assert a is b

    def test_two_player_full_cursing_equals_independent(self):
        rng = random.Random(41)
        for _ in range(10):
            game = random_game(rng, max_players=2, max_horizon=1)
            ce_set = [
                s for s in enumerate_pure(game)
                if check_ce(game, s, 1).is_equilibrium
            ]
            ice_set = [
                s for s in enumerate_pure(game)
                if check_ice(game, s).is_equilibrium
            ]
            assert len(ce_set) == len(ice_set)
            for a, b in zip(ce_set, ice_set):
                assert a == b
