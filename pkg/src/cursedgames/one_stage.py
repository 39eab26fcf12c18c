"""Static (one-stage) cursed play, and pure-profile enumeration.

Two classic benchmarks for simultaneous-move games with private types:

* ``chi``-cursed play: each player best-replies to a mixture of the joint
  type-averaged opponent behavior (weight ``chi``) and the true
  type-contingent behavior.  Correlation between opponents' actions through
  their types survives in the averaged part.
* fully cursed independent play: each opponent's behavior is type-averaged
  separately and treated as independent across opponents, with the prior
  kept on types.

The dynamic checkers reduce to these at horizon one, which the test suite
exercises; three-player games separate the two averages.
"""

from __future__ import annotations

import itertools

from .arith import FLOAT_SLACK, is_exact
from .errors import CombinatorialLimitExceeded, NotOneStage
from .game import BehavioralStrategyProfile, Game, PublicHistory, conditional_prior
from .reports import CheckFailure, EquilibriumReport

__all__ = [
    "ce_objective",
    "ice_objective",
    "check_ce",
    "check_ice",
    "enumerate_pure",
]

_ROOT = PublicHistory()


def _require_one_stage(game: Game):
    if game.horizon != 1:
        raise NotOneStage(
            f"game has horizon {game.horizon}; this concept is for one stage"
        )


def _opponents(game, player):
    return [j for j in range(game.n) if j != player]


def _opp_action_profiles(game, player):
    sets = [game.action_set(j, _ROOT) for j in _opponents(game, player)]
    return [tuple(p) for p in itertools.product(*sets)]


def _joint_average(game, sigma, player, own_type):
    """Type-averaged joint opponent behavior, correlation included."""
    prior = conditional_prior(game, player, own_type)
    opps = _opponents(game, player)
    out = {actions: 0 for actions in _opp_action_profiles(game, player)}
    for opp, weight in prior.items():
        full = game.compose_types(player, own_type, opp)
        for actions in out:
            p = weight
            for j, a in zip(opps, actions):
                p = p * sigma.prob(j, full[j], _ROOT, a)
            out[actions] += p
    return out


def _pooled_marginal(game, sigma, player, own_type, target):
    """One opponent's type-averaged behavior on its own."""
    prior = conditional_prior(game, player, own_type)
    marginal = {}
    for t in game.type_sets[target]:
        weight = sum(
            w for opp, w in prior.items()
            if game.compose_types(player, own_type, opp)[target] == t
        )
        for a, p in sigma.dist(target, t, _ROOT).items():
            marginal[a] = marginal.get(a, 0) + weight * p
    return marginal


def ce_objective(game, sigma, chi, player, own_type, action):
    """Expected payoff of one action under chi-cursed perception."""
    _require_one_stage(game)
    prior = conditional_prior(game, player, own_type)
    avg = _joint_average(game, sigma, player, own_type)
    opps = _opponents(game, player)
    total = 0
    for opp, weight in prior.items():
        if weight == 0:
            continue
        full = game.compose_types(player, own_type, opp)
        for actions in avg:
            true = 1
            for j, a in zip(opps, actions):
                true = true * sigma.prob(j, full[j], _ROOT, a)
            perceived = chi * avg[actions] + (1 - chi) * true
            if perceived == 0:
                continue
            profile = [None] * game.n
            profile[player] = action
            for j, a in zip(opps, actions):
                profile[j] = a
            terminal = _ROOT.extend(tuple(profile))
            total += weight * perceived * game.payoff(full, terminal)[player]
    return total


def ice_objective(game, sigma, player, own_type, action):
    """Expected payoff of one action against independent pooled opponents."""
    _require_one_stage(game)
    prior = conditional_prior(game, player, own_type)
    opps = _opponents(game, player)
    marginals = [
        _pooled_marginal(game, sigma, player, own_type, j) for j in opps
    ]
    total = 0
    for opp, weight in prior.items():
        if weight == 0:
            continue
        full = game.compose_types(player, own_type, opp)
        for actions in _opp_action_profiles(game, player):
            p = weight
            for m, a in zip(marginals, actions):
                p = p * m.get(a, 0)
            if p == 0:
                continue
            profile = [None] * game.n
            profile[player] = action
            for j, a in zip(opps, actions):
                profile[j] = a
            total += p * game.payoff(full, _ROOT.extend(tuple(profile)))[player]
    return total


def _check_static(game, sigma, objective, concept, params, tol):
    report = EquilibriumReport(
        concept=concept, params=params, is_equilibrium=True
    )
    for player in range(game.n):
        for own_type in game.type_sets[player]:
            actions = game.action_set(player, _ROOT)
            if len(actions) < 2:
                continue
            report.checked += 1
            values = {a: objective(player, own_type, a) for a in actions}
            best = max(values.values())
            for a in sigma.support(player, own_type, _ROOT):
                if values[a] < best - tol:
                    report.failures.append(CheckFailure(
                        player, own_type, _ROOT, "not-a-best-reply",
                        f"action {a!r} is not a best reply",
                        margin=best - values[a],
                    ))
    report.is_equilibrium = not report.failures
    return report


def check_ce(game, sigma, chi, tol=None):
    """Best-reply check under chi-cursed perception (one stage)."""
    _require_one_stage(game)
    if not 0 <= chi <= 1:
        raise ValueError("chi must lie in [0, 1]")
    if tol is None:
        exact = game.exact() and sigma.exact() and is_exact(chi)
        tol = 0 if exact else FLOAT_SLACK
    return _check_static(
        game, sigma,
        lambda i, t, a: ce_objective(game, sigma, chi, i, t, a),
        "chi-ce", {"chi": chi}, tol,
    )


def check_ice(game, sigma, tol=None):
    """Best-reply check against independent pooled opponents (one stage)."""
    _require_one_stage(game)
    if tol is None:
        tol = 0 if game.exact() and sigma.exact() else FLOAT_SLACK
    return _check_static(
        game, sigma,
        lambda i, t, a: ice_objective(game, sigma, i, t, a),
        "ice", {}, tol,
    )


def enumerate_pure(game, predicate=None, limit=10_000_000):
    """Yield every pure behavioral profile, optionally filtered.

    Works for any horizon: a pure profile picks one action at each
    (player, type, history) with a real choice.  Raises
    CombinatorialLimitExceeded when the count of profiles passes ``limit``.
    """
    slots = []
    for player in range(game.n):
        for own_type in game.type_sets[player]:
            for stage in range(game.horizon):
                for h in game.histories(stage):
                    actions = game.action_set(player, h)
                    if len(actions) > 1:
                        slots.append(((player, own_type, h), actions))
    count = 1
    for _slot, actions in slots:
        count *= len(actions)
        if count > limit:
            raise CombinatorialLimitExceeded(
                f"{count}+ pure profiles exceed the enumeration limit {limit}"
            )
    for choice in itertools.product(*[actions for _slot, actions in slots]):
        assignment = {
            slot: action for (slot, _a), action in zip(slots, choice)
        }
        profile = BehavioralStrategyProfile.from_pure(game, assignment)
        if predicate is None or predicate(profile):
            yield profile
