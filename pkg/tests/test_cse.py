"""Dampened-update checking: belief algebra and stagewise optimality."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cursedgames import (
    ROOT,
    UNTYPED,
    BehavioralStrategyProfile,
    RequiresTotallyMixed,
    belief_node,
    belief_trajectory,
    check_cse,
    cursed_bayes_step,
    perfect_info_profile,
    signaling_profile,
)
from cursedgames.cse import average_strategy, chi_perceived
from cursedgames.game import conditional_prior
from gamegen import random_game, random_profile

HALF = Fraction(1, 2)


def bayes_posterior(game, sigma, player, own_type, h, belief, profile):
    """Independent fully-Bayesian one-step update for cross-checking."""
    opps = [j for j in range(game.n) if j != player]
    observed = tuple(profile[j] for j in opps)
    weights = {}
    for opp, mass in belief.items():
        full = game.compose_types(player, own_type, opp)
        like = 1
        for j, a in zip(opps, observed):
            like *= sigma.prob(j, full[j], h, a)
        weights[opp] = mass * like
    total = sum(weights.values())
    return {opp: w / total for opp, w in weights.items()}


class TestCursedBayesStep:
    def test_matches_dampened_closed_form(self):
        rng = random.Random(11)
        for _ in range(25):
            game = random_game(rng, max_horizon=2)
            sigma = random_profile(rng, game)
            chi = rng.choice((0, Fraction(1, 3), HALF, 1))
            player = rng.randrange(game.n)
            own = rng.choice(game.type_sets[player])
            belief = conditional_prior(game, player, own)
            for profile in game.joint_actions(ROOT):
                got = cursed_bayes_step(
                    game, sigma, chi, player, own, ROOT, belief, profile
                )
                full_bayes = bayes_posterior(
                    game, sigma, player, own, ROOT, belief, profile
                )
                for opp in belief:
                    want = chi * belief[opp] + (1 - chi) * full_bayes[opp]
                    assert got[opp] == want

    def test_chi_one_freezes_belief(self, signaling):
        sigma = BehavioralStrategyProfile.uniform(signaling)
        prior = conditional_prior(signaling, 1, UNTYPED)
        for profile in signaling.joint_actions(ROOT):
            after = cursed_bayes_step(
                signaling, sigma, 1, 1, UNTYPED, ROOT, prior, profile
            )
            assert after == prior

    def test_chi_zero_is_bayes(self, signaling):
        rng = random.Random(3)
        sigma = random_profile(rng, signaling)
        prior = conditional_prior(signaling, 1, UNTYPED)
        for profile in signaling.joint_actions(ROOT):
            after = cursed_bayes_step(
                signaling, sigma, 0, 1, UNTYPED, ROOT, prior, profile
            )
            want = bayes_posterior(
                signaling, sigma, 1, UNTYPED, ROOT, prior, profile
            )
            assert after == want


class TestTrajectory:
    def test_starts_at_conditional_prior(self, signaling):
        sigma = BehavioralStrategyProfile.uniform(signaling)
        h = signaling.histories(1)[0]
        walk = belief_trajectory(signaling, sigma, HALF, 1, UNTYPED, h)
        assert walk[0] == conditional_prior(signaling, 1, UNTYPED)
        assert len(walk) == 2

    def test_dampened_lower_bound(self):
        rng = random.Random(19)
        for _ in range(20):
            game = random_game(rng)
            sigma = random_profile(rng, game)
            chi = rng.choice((Fraction(1, 4), HALF, Fraction(9, 10)))
            player = rng.randrange(game.n)
            own = rng.choice(game.type_sets[player])
            for h in game.histories(game.horizon - 1):
                walk = belief_trajectory(game, sigma, chi, player, own, h)
                for prev, cur in zip(walk, walk[1:]):
                    for opp in prev:
                        assert cur[opp] >= chi * prev[opp]

    def test_pure_profile_dead_branch_raises(self, signaling, pool_a):
        h_b = signaling.histories(1)[1]
        with pytest.raises(RequiresTotallyMixed):
            belief_trajectory(signaling, pool_a, HALF, 1, UNTYPED, h_b)


class TestBeliefNode:
    def test_on_path_node_is_exact(self, signaling, pool_a):
        h_a = signaling.histories(1)[0]
        node = belief_node(signaling, pool_a, HALF, 1, UNTYPED, h_a)
        assert node.status == "exact"
        assert node.belief == conditional_prior(signaling, 1, UNTYPED)

    def test_off_path_node_is_free_with_prior_anchor(self, signaling, pool_a):
        h_b = signaling.histories(1)[1]
        node = belief_node(signaling, pool_a, HALF, 1, UNTYPED, h_b)
        assert node.status == "free"
        assert node.depth == 1
        assert node.anchor == conditional_prior(signaling, 1, UNTYPED)

    def test_chi_one_off_path_pins_to_prior(self, signaling, pool_a):
        h_b = signaling.histories(1)[1]
        node = belief_node(signaling, pool_a, 1, 1, UNTYPED, h_b)
        assert node.belief == conditional_prior(signaling, 1, UNTYPED)


class TestAverageStrategy:
    def test_type_mixture(self, signaling):
        table = {
            (0, "t1", ROOT): {"A": 1},
            (0, "t2", ROOT): {"B": 1},
        }
        for h in signaling.histories(1):
            table[(1, UNTYPED, h)] = {"L": 1}
        sigma = BehavioralStrategyProfile(signaling, table)
        prior = conditional_prior(signaling, 1, UNTYPED)
        avg = average_strategy(signaling, sigma, 1, UNTYPED, ROOT, prior)
        # averaged over sender types: A with the rare type's weight 1/4
        assert avg[("A",)] == Fraction(1, 4)
        assert avg[("B",)] == Fraction(3, 4)

    def test_perceived_kernel_interpolates(self, signaling):
        table = {
            (0, "t1", ROOT): {"A": 1},
            (0, "t2", ROOT): {"B": 1},
        }
        for h in signaling.histories(1):
            table[(1, UNTYPED, h)] = {"L": 1}
        sigma = BehavioralStrategyProfile(signaling, table)
        prior = conditional_prior(signaling, 1, UNTYPED)
        kernel = chi_perceived(
            signaling, sigma, HALF, 1, UNTYPED, ROOT, prior
        )
        # chi*avg + (1-chi)*typed: for t1 the typed play is A surely
        assert kernel[("t1",)][("A",)] == HALF * Fraction(1, 4) + HALF
        assert kernel[("t2",)][("A",)] == HALF * Fraction(1, 4)


class TestSignalingVerdicts:
    @pytest.mark.parametrize("chi", [0, Fraction(1, 4), HALF, Fraction(8, 9), 1])
    def test_pool_a_always_passes(self, signaling, chi):
        sigma = signaling_profile(signaling, ("A", "A"), ("L", "R"))
        assert check_cse(signaling, sigma, chi).is_equilibrium

    @pytest.mark.parametrize("chi,verdict", [
        (0, True),
        (HALF, True),
        (Fraction(8, 9), True),
        (Fraction(8, 9) + Fraction(1, 1000), False),
        (1, False),
    ])
    def test_pool_b_rr_threshold(self, signaling, chi, verdict):
        sigma = signaling_profile(signaling, ("B", "B"), ("R", "R"))
        assert check_cse(signaling, sigma, chi).is_equilibrium is verdict

    @pytest.mark.parametrize("chi", [0, HALF, 1])
    def test_pool_b_lr_never_passes(self, signaling, chi):
        sigma = signaling_profile(signaling, ("B", "B"), ("L", "R"))
        assert not check_cse(signaling, sigma, chi).is_equilibrium

    def test_free_witness_reported_at_boundary(self, signaling):
        sigma = signaling_profile(signaling, ("B", "B"), ("R", "R"))
        report = check_cse(signaling, sigma, Fraction(8, 9))
        witness = next(iter(report.free_witnesses.values()))
        assert witness == {("t1",): Fraction(1, 3), ("t2",): Fraction(2, 3)}

    def test_supplied_belief_inside_interval_passes(self, signaling, pool_a):
        h_b = signaling.histories(1)[1]
        chi = HALF
        # the A-pool leaves (B) dead; R stays optimal there for any admissible
        # belief, so a mid-interval probe passes
        beliefs = {(1, UNTYPED, h_b): {("t1",): Fraction(1, 3),
                                       ("t2",): Fraction(2, 3)}}
        report = check_cse(signaling, pool_a, chi, off_path_beliefs=beliefs)
        assert report.is_equilibrium

    def test_supplied_belief_outside_free_set_rejected(self, signaling, pool_a):
        h_b = signaling.histories(1)[1]
        # dampening bounds the rare-type weight below by chi/4
        beliefs = {(1, UNTYPED, h_b): {("t1",): Fraction(1, 16),
                                       ("t2",): Fraction(15, 16)}}
        with pytest.raises(ValueError):
            check_cse(signaling, pool_a, HALF, off_path_beliefs=beliefs)


class TestPerfectInfo:
    @pytest.mark.parametrize("chi", [0, HALF, 1])
    def test_backward_induction_survives(self, perfect_info, chi):
        stay = perfect_info_profile(perfect_info, "B", ("b", "r"))
        assert check_cse(perfect_info, stay, chi).is_equilibrium

    @pytest.mark.parametrize("chi", [0, HALF, 1])
    def test_deferring_profile_fails(self, perfect_info, chi):
        defer = perfect_info_profile(perfect_info, "R", ("b", "r"))
        assert not check_cse(perfect_info, defer, chi).is_equilibrium

    def test_full_deviations_agree_here(self, perfect_info):
        stay = perfect_info_profile(perfect_info, "B", ("b", "r"))
        defer = perfect_info_profile(perfect_info, "R", ("b", "r"))
        for sigma, want in ((stay, True), (defer, False)):
            report = check_cse(perfect_info, sigma, HALF, full_deviations=True)
            assert report.is_equilibrium is want


class TestValidation:
    def test_chi_out_of_range(self, signaling, pool_a):
        with pytest.raises(ValueError):
            check_cse(signaling, pool_a, Fraction(3, 2))
        with pytest.raises(ValueError):
            check_cse(signaling, pool_a, -0.1)

    def test_bad_direction_rejected(self, signaling, pool_a):
        def lopsided(player, own_type, h):
            labels = signaling.action_set(player, h)
            return {labels[0]: 1}

        with pytest.raises(ValueError):
            check_cse(signaling, pool_a, HALF, direction=lopsided)
