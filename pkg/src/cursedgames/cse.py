"""Cursed sequential equilibrium for multi-stage games with observed actions.

A player with cursedness ``chi`` misperceives opponents' behavior: instead of
the true type-contingent profile, they believe each opponent plays the
``chi``-weighted mixture of the type-averaged stage strategy and the true
one.  Beliefs follow from that perceived play by Bayes' rule wherever the
observation has positive perceived probability; elsewhere consistency is
imposed through vanishing trembles, which leaves a set of admissible beliefs
with a simple structure: every admissible belief dominates ``chi`` times the
belief held before the dead observation, componentwise.

The checker walks every decision point, classifies its belief as pinned down
or free, and tests one-stage deviations against the perceived continuation.
At free points it searches the admissible set for a supporting belief, exactly
when the objective is linear in the belief and by a rational grid otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import FLOAT_SLACK, LimitTerm, is_exact, limit_sum, find_distribution
from .errors import RequiresTotallyMixed, ZeroProbabilityObservation
from .game import (
    BeliefSystem,
    Game,
    PublicHistory,
    conditional_prior,
)
from .reports import CheckFailure, EquilibriumReport

__all__ = [
    "average_strategy",
    "chi_perceived",
    "cursed_bayes_step",
    "belief_trajectory",
    "consistency_extend",
    "expected_payoff_cse",
    "check_cse",
    "belief_node",
    "BeliefNode",
]


def _opponents(game: Game, player: int) -> list[int]:
    return [j for j in range(game.n) if j != player]


def _opp_action_profiles(game: Game, player: int, h: PublicHistory):
    sets = [game.action_set(j, h) for j in _opponents(game, player)]
    return [tuple(p) for p in itertools.product(*sets)]


def _full_profile(game, player, h, own_action, opp_actions):
    opps = _opponents(game, player)
    profile = [None] * game.n
    profile[player] = own_action
    for j, a in zip(opps, opp_actions):
        profile[j] = a
    return tuple(profile)


def _true_products(game, sigma, player, own_type, h):
    """Per opponent type profile, the product chance of each opponent tuple."""
    opps = _opponents(game, player)
    out = {}
    for opp in game.opponent_type_profiles(player):
        full = game.compose_types(player, own_type, opp)
        row = {}
        for actions in _opp_action_profiles(game, player, h):
            p = 1
            for j, a in zip(opps, actions):
                p = p * sigma.prob(j, full[j], h, a)
                if p == 0:
                    break
            row[actions] = p
        out[opp] = row
    return out


def average_strategy(game, sigma, player, own_type, history, belief):
    """Type-averaged opponent stage behavior under the given belief.

    Returns a distribution over opponent action tuples (players in index
    order, mover or not): the belief-weighted mixture of the opponents'
    type-contingent product play.
    """
    prods = _true_products(game, sigma, player, own_type, history)
    out = {}
    for actions in _opp_action_profiles(game, player, history):
        out[actions] = sum(belief[opp] * prods[opp][actions] for opp in belief)
    return out


def chi_perceived(game, sigma, chi, player, own_type, history, belief):
    """Perceived opponent stage kernel, per opponent type profile.

    The kernel mixes the type-averaged stage behavior (weight ``chi``) with
    the true type-contingent product (weight ``1 - chi``).
    """
    prods = _true_products(game, sigma, player, own_type, history)
    avg = average_strategy(game, sigma, player, own_type, history, belief)
    out = {}
    for opp, row in prods.items():
        out[opp] = {
            actions: chi * avg[actions] + (1 - chi) * row[actions]
            for actions in row
        }
    return out


def cursed_bayes_step(game, sigma, chi, player, own_type, history, belief, profile):
    """One belief update after observing a stage action profile.

    ``profile`` is the full observed action tuple for the stage played at
    ``history``.  Raises ZeroProbabilityObservation when the observation has
    zero perceived probability under the belief.
    """
    opps = _opponents(game, player)
    observed = tuple(profile[j] for j in opps)
    kernel = chi_perceived(game, sigma, chi, player, own_type, history, belief)
    weights = {opp: belief[opp] * kernel[opp][observed] for opp in belief}
    total = sum(weights.values())
    if total == 0:
        raise ZeroProbabilityObservation(
            f"observation {observed} has zero perceived probability at "
            f"{history!r}"
        )
    return {opp: w / total for opp, w in weights.items()}


def belief_trajectory(game, sigma, chi, player, own_type, history):
    """Beliefs along a history, one entry per prefix.

    Folds the cursed update from the conditional prior.  Raises
    RequiresTotallyMixed when some step has zero perceived probability; use
    consistency_extend to assign beliefs through such steps.
    """
    belief = conditional_prior(game, player, own_type)
    out = [belief]
    h = PublicHistory()
    for profile in history.actions:
        try:
            belief = cursed_bayes_step(
                game, sigma, chi, player, own_type, h, belief, profile
            )
        except ZeroProbabilityObservation as exc:
            raise RequiresTotallyMixed(
                f"history {history!r} leaves the perceived support at stage "
                f"{h.stage + 1}; extend beliefs with consistency_extend"
            ) from exc
        h = h.extend(profile)
        out.append(belief)
    return out


# -- tremble-limit walk ---------------------------------------------------


@dataclass
class BeliefNode:
    """Belief status at one decision point of one player-type.

    status is "exact" (Bayes-pinned), "free" (a dead observation left a set
    of admissible beliefs; every admissible belief dominates
    ``chi**depth * anchor``), or "pinned" (a positive-probability step was
    taken from inside a free set; the stored belief is the uniform-tremble
    representative and the node is flagged approximate).
    """

    status: str
    belief: dict
    anchor: dict | None = None
    depth: int = 0
    approximate: bool = False


def _uniform_direction(game):
    def direction(player, own_type, h):
        labels = game.action_set(player, h)
        share = Fraction(1, len(labels)) if game.exact() else 1.0 / len(labels)
        return {a: share for a in labels}

    return direction


def _check_direction(game, direction):
    if direction is None:
        return _uniform_direction(game)

    def checked(player, own_type, h):
        weights = direction(player, own_type, h)
        labels = game.action_set(player, h)
        if set(weights) != set(labels):
            raise ValueError(f"tremble direction must cover {labels}")
        total = sum(weights.values())
        if any(w <= 0 for w in weights.values()) or abs(total - 1) > 1e-9:
            raise ValueError("tremble direction must be a full-support distribution")
        return weights

    return checked


def _walk_player(game, sigma, chi, player, own_type, direction):
    """Classify every nonterminal history for one player-type.

    Runs the tremble-limit fold of unnormalized opponent-type weights and the
    on/off-path bookkeeping in a single pass.  Returns history -> BeliefNode.
    """
    opps = _opponents(game, player)
    prior = conditional_prior(game, player, own_type)
    w0 = {opp: LimitTerm.const(p) for opp, p in prior.items()}
    nodes: dict[PublicHistory, BeliefNode] = {}
    root = PublicHistory()
    frontier = [(root, w0, "exact", None, 0, False)]
    while frontier:
        next_frontier = []
        for h, w, status, anchor, depth, approx in frontier:
            total = limit_sum(w.values())
            belief = {opp: term.ratio_to(total) for opp, term in w.items()}
            nodes[h] = BeliefNode(status, belief, anchor, depth, approx)
            if h.stage >= game.horizon - 1:
                continue
            prods = _true_products(game, sigma, player, own_type, h)
            for actions in _opp_action_profiles(game, player, h):
                terms = {}
                for opp in w:
                    full = game.compose_types(player, own_type, opp)
                    t = LimitTerm.const(1)
                    for j, a in zip(opps, actions):
                        d = direction(j, full[j], h)
                        t = t * LimitTerm.trembled(sigma.prob(j, full[j], h, a), d[a])
                    terms[opp] = t
                s_term = limit_sum(w[opp] * terms[opp] for opp in w)
                w_child = {
                    opp: w[opp]
                    * (s_term.scale(chi) + (total * terms[opp]).scale(1 - chi))
                    for opp in w
                }
                step_prob = s_term.ratio_to(total)
                could_move = any(
                    belief[opp] > 0 and prods[opp][actions] > 0 for opp in belief
                ) if chi == 1 else any(
                    prods[opp][actions] > 0 for opp in prods
                )
                if status in ("exact", "pinned"):
                    if step_prob > 0:
                        child = (h, w_child, status, anchor, depth, approx)
                    else:
                        child = (h, w_child, "free", dict(belief), 1, approx)
                else:  # free
                    if could_move:
                        child = (
                            h,
                            w_child,
                            "pinned",
                            anchor,
                            depth,
                            approx or chi != 1,
                        )
                    else:
                        child = (h, w_child, "free", anchor, depth + 1, approx)
                own_set = game.action_set(player, h)
                for own_action in own_set:
                    full_profile = _full_profile(game, player, h, own_action, actions)
                    next_frontier.append(
                        (h.extend(full_profile),) + tuple(child[1:])
                    )
        frontier = next_frontier
    return nodes


def belief_node(game, sigma, chi, player, own_type, history, direction=None):
    """Belief status of one decision point (see BeliefNode)."""
    direction = _check_direction(game, direction)
    nodes = _walk_player(game, sigma, chi, player, own_type, direction)
    return nodes[history]


def consistency_extend(
    game,
    sigma,
    chi,
    mode="exact",
    direction=None,
    epsilons=(1e-4, 1e-6, 1e-8),
    tol=1e-6,
):
    """Belief system over all decision points, defined on and off the path.

    mode "exact" takes the tremble limit symbolically (leading-order terms of
    the perturbed fold), which is exact for rational and float data alike.
    mode "float" evaluates the perturbed fold at the given epsilon ladder and
    accepts when the last two rungs agree entrywise within ``tol``, raising
    LimitDidNotStabilize otherwise.  Trembles default to uniform; pass
    ``direction`` for another full-support family.
    """
    direction = _check_direction(game, direction)
    table = {}
    if mode == "exact":
        for player in range(game.n):
            for own_type in game.type_sets[player]:
                nodes = _walk_player(game, sigma, chi, player, own_type, direction)
                for h, node in nodes.items():
                    table[(player, own_type, h)] = node.belief
        return BeliefSystem(game, table)
    if mode != "float":
        raise ValueError("mode must be 'exact' or 'float'")
    from .errors import LimitDidNotStabilize

    ladders = []
    for eps in epsilons:
        ladders.append(_float_fold(game, sigma, chi, direction, eps))
    last, prev = ladders[-1], ladders[-2]
    for key, belief in last.items():
        for opp, value in belief.items():
            if abs(value - prev[key][opp]) > tol:
                raise LimitDidNotStabilize(
                    f"belief at {key} still moving between eps="
                    f"{epsilons[-2]} and eps={epsilons[-1]}"
                )
    return BeliefSystem(game, last)


def _float_fold(game, sigma, chi, direction, eps):
    chi = float(chi)
    table = {}
    for player in range(game.n):
        opps = _opponents(game, player)
        for own_type in game.type_sets[player]:
            prior = conditional_prior(game, player, own_type)
            frontier = [(PublicHistory(), {k: float(v) for k, v in prior.items()})]
            while frontier:
                next_frontier = []
                for h, belief in frontier:
                    table[(player, own_type, h)] = belief
                    if h.stage >= game.horizon - 1:
                        continue
                    for actions in _opp_action_profiles(game, player, h):
                        weights = {}
                        for opp in belief:
                            full = game.compose_types(player, own_type, opp)
                            p = 1.0
                            for j, a in zip(opps, actions):
                                d = direction(j, full[j], h)
                                p *= (1 - eps) * float(
                                    sigma.prob(j, full[j], h, a)
                                ) + eps * float(d[a])
                            weights[opp] = p
                        avg = sum(belief[o] * weights[o] for o in belief)
                        posterior = {
                            o: belief[o] * (chi * avg + (1 - chi) * weights[o])
                            for o in belief
                        }
                        total = sum(posterior.values())
                        posterior = {o: v / total for o, v in posterior.items()}
                        for own_action in game.action_set(player, h):
                            profile = _full_profile(
                                game, player, h, own_action, actions
                            )
                            next_frontier.append((h.extend(profile), posterior))
                frontier = next_frontier
    return table


# -- valuation ------------------------------------------------------------


def _value(game, sigma, chi, player, own_type, h, w, *, own_sigma=None,
           maximize=False, force_first=None):
    """Expected continuation payoff from unnormalized opponent-type weights.

    Opponents follow the perceived kernel derived from the running weights;
    own play follows ``own_sigma`` (default ``sigma``), or maximizes stagewise
    when ``maximize``.  ``force_first`` fixes the own action at ``h`` only.
    """
    if h.stage == game.horizon:
        total = 0
        for opp, mass in w.items():
            if mass == 0:
                continue
            full = game.compose_types(player, own_type, opp)
            total += mass * game.payoff(full, h)[player]
        return total
    grand = sum(w.values())
    if grand == 0:
        return 0
    own_sigma = own_sigma or sigma
    prods = _true_products(game, sigma, player, own_type, h)
    opp_profiles = _opp_action_profiles(game, player, h)
    sbar = {
        actions: sum(w[opp] * prods[opp][actions] for opp in w) / grand
        for actions in opp_profiles
    }
    values = {}
    for own_action in game.action_set(player, h):
        total = 0
        for actions in opp_profiles:
            w_child = {
                opp: w[opp]
                * (chi * sbar[actions] + (1 - chi) * prods[opp][actions])
                for opp in w
            }
            if all(v == 0 for v in w_child.values()):
                continue
            child = h.extend(_full_profile(game, player, h, own_action, actions))
            total += _value(
                game, sigma, chi, player, own_type, child, w_child,
                own_sigma=own_sigma, maximize=maximize,
            )
        values[own_action] = total
    if force_first is not None:
        return values[force_first]
    if maximize:
        return max(values.values())
    return sum(
        own_sigma.prob(player, own_type, h, a) * v for a, v in values.items()
    )


def expected_payoff_cse(
    game, sigma, chi, player, own_type, history, belief=None, own_strategy=None
):
    """Perceived expected continuation payoff at one decision point.

    ``belief`` defaults to the tremble-limit belief at the point.  Passing
    ``own_strategy`` evaluates a deviation plan against the same perceived
    opponent play.
    """
    if belief is None:
        belief = belief_node(game, sigma, chi, player, own_type, history).belief
    return _value(
        game, sigma, chi, player, own_type, history, dict(belief),
        own_sigma=own_strategy,
    )


# -- the check ------------------------------------------------------------


def _stage_type_independent(game, sigma, player, h, tol):
    for j in _opponents(game, player):
        if len(game.action_set(j, h)) < 2:
            continue
        rows = [sigma.dist(j, t, h) for t in game.type_sets[j]]
        first = rows[0]
        for row in rows[1:]:
            if any(abs(row[a] - first[a]) > tol for a in first):
                return False
    return True


def _future_opponent_movers(game, player, h):
    stack = [h]
    first = True
    while stack:
        cur = stack.pop()
        if cur.stage >= game.horizon:
            continue
        if not first:
            for j in _opponents(game, player):
                if len(game.action_set(j, cur)) > 1:
                    return True
        first = False
        if cur.stage < game.horizon - 1:
            stack.extend(cur.extend(p) for p in game.joint_actions(cur))
    return False


def _beta_grid(k, denominator):
    for parts in itertools.combinations(
        range(denominator + k - 1), k - 1
    ):
        cuts = (-1,) + parts + (denominator + k - 1,)
        yield tuple(
            Fraction(cuts[i + 1] - cuts[i] - 1, denominator) for i in range(k)
        )


def check_cse(
    game,
    sigma,
    chi,
    *,
    full_deviations=False,
    off_path_beliefs=None,
    direction=None,
    grid_denominator=6,
    tol=None,
):
    """Test whether a profile is a cursed sequential equilibrium at ``chi``.

    Every decision point is checked for one-stage-deviation optimality under
    the perceived continuation.  Where a dead observation leaves a set of
    admissible beliefs, the checker searches that set for a supporting
    belief: exactly (vertex enumeration) whenever the objective is linear in
    the belief, otherwise over a rational grid, in which case a negative
    verdict is marked approximate.  Caller-supplied ``off_path_beliefs``
    (mapping ``(player, type, history)`` to a belief) are validated against
    the admissible set and then used as-is.  ``full_deviations`` additionally
    compares against the best multi-stage deviation at every point with a
    determinate belief.
    """
    if not 0 <= chi <= 1:
        raise ValueError("chi must lie in [0, 1]")
    if tol is None:
        exact = game.exact() and sigma.exact() and is_exact(chi)
        tol = 0 if exact else FLOAT_SLACK
    direction = _check_direction(game, direction)
    supplied = off_path_beliefs or {}
    if isinstance(supplied, BeliefSystem):
        supplied = {key: b for key, b in supplied.items()}
    report = EquilibriumReport(
        concept="chi-cse", params={"chi": chi}, is_equilibrium=True,
    )
    table = {}
    for player in range(game.n):
        for own_type in game.type_sets[player]:
            nodes = _walk_player(game, sigma, chi, player, own_type, direction)
            for h, node in nodes.items():
                table[(player, own_type, h)] = node.belief
                if len(game.action_set(player, h)) < 2:
                    continue
                report.checked += 1
                _check_point(
                    game, sigma, chi, player, own_type, h, node,
                    supplied.get((player, own_type, h)),
                    report, grid_denominator, tol, full_deviations,
                )
    report.beliefs = BeliefSystem(game, table)
    report.is_equilibrium = not report.failures
    return report


def _check_point(game, sigma, chi, player, own_type, h, node, given,
                 report, grid_denominator, tol, full_deviations):
    support = sigma.support(player, own_type, h)
    if given is not None:
        _validate_given(game, chi, player, own_type, h, node, given, tol)
        belief = given
    elif node.status == "free" and chi != 1:
        _check_free(
            game, sigma, chi, player, own_type, h, node, support,
            report, grid_denominator, tol,
        )
        return
    else:
        belief = node.belief
        if node.approximate:
            report.approximate = True
            report.notes.append(
                f"belief at player {player + 1}, {h!r} is a tremble "
                f"representative taken beyond a dead observation"
            )
    values = {
        a: _value(game, sigma, chi, player, own_type, h, dict(belief),
                  force_first=a)
        for a in game.action_set(player, h)
    }
    best = max(values.values())
    for a in support:
        if values[a] < best - tol:
            report.failures.append(CheckFailure(
                player, own_type, h, "one-stage-deviation",
                f"action {a!r} is not a stage best reply",
                margin=best - values[a],
            ))
    if full_deviations:
        current = _value(game, sigma, chi, player, own_type, h, dict(belief))
        top = _value(game, sigma, chi, player, own_type, h, dict(belief),
                     maximize=True)
        if current < top - tol:
            report.failures.append(CheckFailure(
                player, own_type, h, "multi-stage-deviation",
                "a multi-stage plan improves on the prescribed play",
                margin=top - current,
            ))


def _validate_given(game, chi, player, own_type, h, node, given, tol):
    opp_profiles = game.opponent_type_profiles(player)
    if set(given) != set(opp_profiles):
        raise ValueError("supplied belief does not cover opponent type profiles")
    total = sum(given.values())
    if abs(total - 1) > max(tol, 1e-9) or any(v < -tol for v in given.values()):
        raise ValueError("supplied belief is not a distribution")
    if node.status == "free":
        floor = chi ** node.depth
        for opp in opp_profiles:
            if given[opp] < floor * node.anchor[opp] - tol:
                raise ValueError(
                    f"supplied belief at {h!r} falls below the admissible "
                    f"floor on {opp}"
                )
    else:
        for opp in opp_profiles:
            if abs(given[opp] - node.belief[opp]) > max(tol, 1e-9):
                raise ValueError(
                    f"belief at {h!r} is pinned by consistency; the supplied "
                    f"value disagrees"
                )


def _check_free(game, sigma, chi, player, own_type, h, node, support,
                report, grid_denominator, tol):
    """Search the admissible belief set for one supporting the stage play."""
    opp_profiles = game.opponent_type_profiles(player)
    floor = chi ** node.depth
    lows = [floor * node.anchor[opp] for opp in opp_profiles]
    actions = game.action_set(player, h)
    no_movers = all(
        len(game.action_set(j, h)) < 2 for j in _opponents(game, player)
    )
    linear = (
        chi == 0
        or (
            (no_movers or _stage_type_independent(game, sigma, player, h, tol))
            and (
                h.stage == game.horizon - 1
                or chi == 0
                or not _future_opponent_movers(game, player, h)
            )
        )
    )
    if linear:
        coeff = _linear_coefficients(
            game, sigma, chi, player, own_type, h, opp_profiles, actions
        )
        inequalities = []
        for a_star in support:
            for a in actions:
                if a == a_star:
                    continue
                row = [coeff[opp][a_star] - coeff[opp][a] for opp in opp_profiles]
                inequalities.append((row, 0))
        witness = find_distribution(lows, inequalities, tol=tol)
        if witness is None:
            report.failures.append(CheckFailure(
                player, own_type, h, "no-supporting-belief",
                "no admissible belief makes the prescribed stage play optimal",
            ))
        else:
            report.free_witnesses[(player, own_type, h)] = dict(
                zip(opp_profiles, witness)
            )
        return
    found = None
    slack = 1 - floor
    for beta in _beta_grid(len(opp_profiles), grid_denominator):
        belief = {
            opp: lows[k] + slack * beta[k]
            for k, opp in enumerate(opp_profiles)
        }
        values = {
            a: _value(game, sigma, chi, player, own_type, h, dict(belief),
                      force_first=a)
            for a in actions
        }
        best = max(values.values())
        if all(values[a] >= best - tol for a in support):
            found = belief
            break
    if found is None:
        report.approximate = True
        report.failures.append(CheckFailure(
            player, own_type, h, "no-supporting-belief",
            "grid search over the admissible belief set found no support "
            f"(denominator {grid_denominator}); verdict is approximate",
        ))
    else:
        report.free_witnesses[(player, own_type, h)] = found


def _linear_coefficients(game, sigma, chi, player, own_type, h,
                         opp_profiles, actions):
    """Per opponent type profile, the belief-linear value of each action."""
    prods = _true_products(game, sigma, player, own_type, h)
    opp_action_profiles = _opp_action_profiles(game, player, h)
    coeff = {}
    for opp in opp_profiles:
        row = {}
        for own_action in actions:
            total = 0
            for opp_actions in opp_action_profiles:
                if chi == 0:
                    k = prods[opp][opp_actions]
                elif len(opp_action_profiles) == 1:
                    k = 1
                else:
                    k = prods[opp_profiles[0]][opp_actions]
                if k == 0:
                    continue
                child = h.extend(
                    _full_profile(game, player, h, own_action, opp_actions)
                )
                cont = _value(
                    game, sigma, chi, player, own_type, child, {opp: 1}
                )
                total += k * cont
            row[own_action] = total
        coeff[opp] = row
    return coeff
