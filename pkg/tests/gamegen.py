"""Seeded random small games and profiles for the property suites.

Games are kept deliberately tiny (bounded players, types, horizon, and
terminal count) so several hundred can be checked per run.  All numbers
are rational, so engine runs on these games are exact.
"""

from __future__ import annotations

import itertools
import random
import zlib
from fractions import Fraction

from cursedgames import (
    UNTYPED,
    BehavioralStrategyProfile,
    GameSpec,
    build_game,
)


def _stable_int(*parts) -> int:
    return zlib.crc32("|".join(str(p) for p in parts).encode("utf-8"))


def random_game(
    rng: random.Random,
    *,
    max_players: int = 3,
    max_types: int = 2,
    max_horizon: int = 3,
    max_terminals: int = 48,
    name: str = "random",
):
    """A random well-formed game within the stated bounds."""
    n = rng.randint(2, max_players)
    horizon = rng.randint(1, max_horizon)
    type_sets = []
    for i in range(n):
        k = rng.randint(1, max_types)
        if k == 1:
            type_sets.append((UNTYPED,))
        else:
            type_sets.append(tuple(f"t{i}{c}" for c in "abcd"[:k]))
    profiles = list(itertools.product(*type_sets))
    weights = [rng.randint(1, 5) for _ in profiles]
    total = sum(weights)
    prior = {tp: Fraction(w, total) for tp, w in zip(profiles, weights)}

    plans: dict[tuple[int, int], tuple[str, ...] | None] = {}
    for s in range(horizon):
        for i in range(n):
            k = rng.choice((1, 1, 2, 2, 2, 3))
            plans[(i, s)] = (
                tuple(f"a{j}" for j in range(k)) if k > 1 else None
            )
    # clamp the tree: shrink the widest stage until the terminal count fits
    def terminals() -> int:
        count = 1
        for s in range(horizon):
            for i in range(n):
                plan = plans[(i, s)]
                count *= len(plan) if plan else 1
        return count

    wide = [key for key, plan in plans.items() if plan]
    rng.shuffle(wide)
    while terminals() > max_terminals and wide:
        plans[wide.pop()] = None
    if not any(plans.values()):
        plans[(0, 0)] = ("a0", "a1")

    payoff_seed = rng.getrandbits(32)

    def actions(i, h):
        return plans[(i, h.stage)]

    def payoffs(types, h):
        return tuple(
            _stable_int(payoff_seed, types, h.actions, i) % 13 - 6
            for i in range(n)
        )

    return build_game(GameSpec(
        name=name,
        players=tuple(f"p{i}" for i in range(n)),
        type_sets=tuple(type_sets),
        prior=prior,
        horizon=horizon,
        actions=actions,
        payoffs=payoffs,
    ))


def random_profile(rng: random.Random, game, *, pure: bool = False):
    """A random profile; totally mixed with rational weights unless pure."""
    table = {}
    for i in range(game.n):
        for own in game.type_sets[i]:
            for h in game.nonterminal_histories():
                labels = game.action_set(i, h)
                if len(labels) < 2:
                    continue
                if pure:
                    table[(i, own, h)] = {rng.choice(labels): 1}
                else:
                    w = [rng.randint(1, 4) for _ in labels]
                    t = sum(w)
                    table[(i, own, h)] = {
                        a: Fraction(x, t) for a, x in zip(labels, w)
                    }
    return BehavioralStrategyProfile(game, table)
