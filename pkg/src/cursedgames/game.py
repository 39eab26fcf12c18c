"""Finite multi-stage games with observed actions.

The model: N players, each with a finite private type set, draw a type
profile once from a full-support common prior.  Play then proceeds through a
fixed number of stages.  At every stage every player chooses an action
simultaneously from a finite set that may depend on the public history (the
sequence of past stage action profiles) but never on types.  All actions are
publicly observed; payoffs attach to (type profile, terminal history) pairs.

Players that do not genuinely move at a history are modeled with a singleton
action set, so a stage action profile always has one component per player.
Histories are materialized once at construction in a stable order: stage by
stage, children sorted by their action-profile label tuple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .arith import NORM_TOL, Number, is_exact, number_str
from .errors import (
    DanglingHistory,
    EmptyActionSet,
    MissingPayoff,
    PriorNotFullSupport,
    PriorNotNormalized,
    StageOutOfRange,
)

#: Action label automatically given to players who do not move at a history.
PASS = "pass"

#: Type label automatically given to players with no private information.
UNTYPED = "-"

TypeProfile = tuple[str, ...]
ActionProfile = tuple[str, ...]


@dataclass(frozen=True)
class PublicHistory:
    """A sequence of stage action profiles, one tuple per completed stage."""

    actions: tuple[ActionProfile, ...] = ()

    @property
    def stage(self) -> int:
        return len(self.actions)

    def extend(self, profile: ActionProfile) -> "PublicHistory":
        return PublicHistory(self.actions + (profile,))

    def prefix(self, t: int) -> "PublicHistory":
        return PublicHistory(self.actions[:t])

    def is_prefix_of(self, other: "PublicHistory") -> bool:
        return self.actions == other.actions[: len(self.actions)]

    def player_actions(self, player: int) -> tuple[str, ...]:
        """This player's own action sequence along the history."""
        return tuple(profile[player] for profile in self.actions)

    def __repr__(self) -> str:
        if not self.actions:
            return "<root>"
        return "".join("(" + ",".join(p) + ")" for p in self.actions)


ROOT = PublicHistory()


class Game:
    """An immutable finite multi-stage game with observed actions."""

    def __init__(
        self,
        name: str,
        players: Sequence[str],
        type_sets: Sequence[Sequence[str]],
        prior: Mapping[TypeProfile, Number],
        horizon: int,
        actions: Mapping[tuple[int, PublicHistory], tuple[str, ...]],
        payoffs: Mapping[tuple[TypeProfile, PublicHistory], tuple[Number, ...]],
        histories: Sequence[Sequence[PublicHistory]],
    ):
        self.name = name
        self.players = tuple(players)
        self.n = len(self.players)
        self.type_sets = tuple(tuple(ts) for ts in type_sets)
        self.prior = dict(prior)
        self.horizon = horizon
        self._actions = dict(actions)
        self.payoffs = dict(payoffs)
        self._histories = tuple(tuple(hs) for hs in histories)

    # -- structure -----------------------------------------------------

    def histories(self, stage: int) -> tuple[PublicHistory, ...]:
        """All public histories with the given number of completed stages."""
        if not 0 <= stage <= self.horizon:
            raise StageOutOfRange(f"stage {stage} outside 0..{self.horizon}")
        return self._histories[stage]

    def nonterminal_histories(self) -> Iterable[PublicHistory]:
        for stage in range(self.horizon):
            yield from self._histories[stage]

    def terminal_histories(self) -> tuple[PublicHistory, ...]:
        return self._histories[self.horizon]

    def action_set(self, player: int, history: PublicHistory) -> tuple[str, ...]:
        return self._actions[(player, history)]

    def joint_actions(self, history: PublicHistory) -> list[ActionProfile]:
        """All stage action profiles available at a nonterminal history."""
        sets = [self._actions[(i, history)] for i in range(self.n)]
        return [tuple(p) for p in itertools.product(*sets)]

    def movers(self, history: PublicHistory) -> list[int]:
        """Players with a real choice (more than one action) at a history."""
        return [
            i
            for i in range(self.n)
            if len(self._actions[(i, history)]) > 1
        ]

    def type_profiles(self) -> list[TypeProfile]:
        return [tuple(p) for p in itertools.product(*self.type_sets)]

    def opponent_type_profiles(self, player: int) -> list[tuple[str, ...]]:
        """Type profiles of everyone except `player`, in player order."""
        sets = [ts for j, ts in enumerate(self.type_sets) if j != player]
        return [tuple(p) for p in itertools.product(*sets)]

    def compose_types(
        self, player: int, own: str, others: tuple[str, ...]
    ) -> TypeProfile:
        """Reassemble a full type profile from own type and opponents' tuple."""
        profile = list(others)
        profile.insert(player, own)
        return tuple(profile)

    def split_types(self, player: int, profile: TypeProfile) -> tuple[str, ...]:
        """Drop this player's component from a full type profile."""
        return tuple(t for j, t in enumerate(profile) if j != player)

    def payoff(self, profile: TypeProfile, terminal: PublicHistory) -> tuple[Number, ...]:
        return self.payoffs[(profile, terminal)]

    def history_text(self, history: PublicHistory) -> str:
        """Canonical movers-only rendering, e.g. ``(A)(L)``."""
        parts = []
        for t, stage_profile in enumerate(history.actions):
            prefix = history.prefix(t)
            shown = [
                stage_profile[i]
                for i in range(self.n)
                if len(self._actions[(i, prefix)]) > 1
            ]
            parts.append("(" + ",".join(shown) + ")")
        return "".join(parts)

    def exact(self) -> bool:
        return is_exact(self.prior) and is_exact(
            *(v for v in self.payoffs.values())
        )

    def to_float(self) -> "Game":
        """A float-arithmetic twin of this game (same structure and labels)."""
        return Game(
            self.name,
            self.players,
            self.type_sets,
            {k: float(v) for k, v in self.prior.items()},
            self.horizon,
            self._actions,
            {k: tuple(float(x) for x in v) for k, v in self.payoffs.items()},
            self._histories,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.players == other.players
            and self.type_sets == other.type_sets
            and self.prior == other.prior
            and self.horizon == other.horizon
            and self._actions == other._actions
            and self.payoffs == other.payoffs
        )

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"Game({self.name!r}, players={self.n}, horizon={self.horizon}, "
            f"terminals={len(self.terminal_histories())})"
        )


@dataclass
class GameSpec:
    """Raw material for :func:`build_game`.

    ``actions`` maps ``(player_index, history)`` to a label tuple, or is a
    callable with that signature; pairs left unspecified get a singleton pass
    action.  ``payoffs`` maps ``(type_profile, terminal_history)`` to a payoff
    tuple, or is a callable with that signature.
    """

    name: str
    players: Sequence[str]
    type_sets: Sequence[Sequence[str]]
    prior: Mapping[TypeProfile, Number]
    horizon: int
    actions: Mapping[tuple[int, PublicHistory], Sequence[str]] | Callable
    payoffs: Mapping[tuple[TypeProfile, PublicHistory], Sequence[Number]] | Callable
    pass_label: Callable[[int, PublicHistory], str] | None = None


def build_game(spec: GameSpec) -> Game:
    """Materialize and validate a game from a GameSpec.

    Enumerates the history tree stage by stage (children in sorted label-tuple
    order), fills singleton pass actions for non-movers, and validates the
    prior, action sets and payoff table.
    """
    n = len(spec.players)
    if spec.horizon < 1:
        raise StageOutOfRange(f"horizon must be >= 1, got {spec.horizon}")
    if len(spec.type_sets) != n:
        raise DanglingHistory("one type set required per player")

    type_profiles = [tuple(p) for p in itertools.product(*spec.type_sets)]
    prior = {tuple(k): v for k, v in spec.prior.items()}
    unknown = set(prior) - set(type_profiles)
    if unknown:
        raise DanglingHistory(f"prior entry for unknown type profile {sorted(unknown)[0]}")
    total = sum(prior.get(tp, 0) for tp in type_profiles)
    exact = is_exact(prior)
    if (exact and total != 1) or (not exact and abs(total - 1) > NORM_TOL):
        raise PriorNotNormalized(f"prior sums to {number_str(total)}, expected 1")
    for tp in type_profiles:
        if prior.get(tp, 0) <= 0:
            raise PriorNotFullSupport(f"prior({tp}) must be positive")

    if callable(spec.actions):
        lookup = spec.actions
        declared_keys: set | None = None
    else:
        table = {k: tuple(v) for k, v in spec.actions.items()}
        declared_keys = set(table)
        lookup = lambda i, h: table.get((i, h))

    used_keys: set = set()
    actions: dict[tuple[int, PublicHistory], tuple[str, ...]] = {}
    histories: list[list[PublicHistory]] = [[ROOT]]
    for stage in range(spec.horizon):
        level = histories[stage]
        next_level: list[PublicHistory] = []
        for h in level:
            for i in range(n):
                declared = lookup(i, h)
                if declared is None:
                    if spec.pass_label is not None:
                        labels: tuple[str, ...] = (spec.pass_label(i, h),)
                    else:
                        labels = (PASS,)
                else:
                    used_keys.add((i, h))
                    labels = tuple(declared)
                if not labels:
                    raise EmptyActionSet(
                        f"player {spec.players[i]} has no actions at {h!r}"
                    )
                if len(set(labels)) != len(labels):
                    raise DanglingHistory(
                        f"duplicate action label for player {spec.players[i]} at {h!r}"
                    )
                actions[(i, h)] = labels
            sets = [actions[(i, h)] for i in range(n)]
            children = sorted(tuple(p) for p in itertools.product(*sets))
            next_level.extend(h.extend(p) for p in children)
        histories.append(next_level)

    if declared_keys is not None:
        stray = declared_keys - used_keys
        if stray:
            i, h = sorted(stray, key=lambda k: (k[0], repr(k[1])))[0]
            raise DanglingHistory(
                f"action entry for player {spec.players[i]} at {h!r} "
                "does not match any generated history"
            )

    terminals = histories[spec.horizon]
    if callable(spec.payoffs):
        payoff_lookup = spec.payoffs
        payoff_keys: set | None = None
    else:
        payoff_table = {k: tuple(v) for k, v in spec.payoffs.items()}
        payoff_keys = set(payoff_table)
        payoff_lookup = lambda tp, h: payoff_table.get((tp, h))

    payoffs: dict[tuple[TypeProfile, PublicHistory], tuple[Number, ...]] = {}
    wanted = set()
    for tp in type_profiles:
        for h in terminals:
            wanted.add((tp, h))
            entry = payoff_lookup(tp, h)
            if entry is None:
                raise MissingPayoff(f"no payoff for types {tp} at {h!r}")
            entry = tuple(entry)
            if len(entry) != n:
                raise MissingPayoff(
                    f"payoff for types {tp} at {h!r} has {len(entry)} entries, "
                    f"expected {n}"
                )
            payoffs[(tp, h)] = entry
    if payoff_keys is not None:
        stray = payoff_keys - wanted
        if stray:
            tp, h = sorted(stray, key=repr)[0]
            raise DanglingHistory(
                f"payoff entry for types {tp} at {h!r} "
                "does not match any terminal history"
            )

    return Game(
        spec.name,
        spec.players,
        spec.type_sets,
        {tp: prior[tp] for tp in type_profiles},
        spec.horizon,
        actions,
        payoffs,
        histories,
    )


def conditional_prior(game: Game, player: int, own_type: str) -> dict[tuple[str, ...], Number]:
    """Prior belief about opponents' types given one's own type."""
    if own_type not in game.type_sets[player]:
        raise DanglingHistory(
            f"unknown type {own_type!r} for player {game.players[player]}"
        )
    weights = {}
    for others in game.opponent_type_profiles(player):
        full = game.compose_types(player, own_type, others)
        weights[others] = game.prior[full]
    total = sum(weights.values())
    return {k: v / total for k, v in weights.items()}


def terminal_reach_probability(
    game: Game,
    sigma: "BehavioralStrategyProfile",
    types: TypeProfile,
    h_from: PublicHistory,
    terminal: PublicHistory,
) -> Number:
    """Probability that play starting at ``h_from`` realizes ``terminal``.

    The product of all players' action probabilities stage by stage from
    ``h_from`` to the terminal history, for a fixed type profile.  Returns 0
    when ``h_from`` is not a prefix of ``terminal``.
    """
    if terminal.stage != game.horizon:
        raise StageOutOfRange(
            f"history {terminal!r} is not terminal (stage {terminal.stage}, "
            f"horizon {game.horizon})"
        )
    if h_from.stage > game.horizon:
        raise StageOutOfRange(f"history {h_from!r} exceeds the horizon")
    if not h_from.is_prefix_of(terminal):
        return 0
    prob: Number = 1
    for t in range(h_from.stage, terminal.stage):
        prefix = terminal.prefix(t)
        profile = terminal.actions[t]
        for i in range(game.n):
            prob *= sigma.prob(i, types[i], prefix, profile[i])
            if prob == 0:
                return prob
    return prob


class BehavioralStrategyProfile:
    """One action distribution per (player, own type, nonterminal history).

    Entries for singleton action sets may be omitted; they are filled with the
    forced action.  Distributions are validated for support and normalization
    at construction.
    """

    def __init__(
        self,
        game: Game,
        table: Mapping[tuple[int, str, PublicHistory], Mapping[str, Number]],
    ):
        self.game = game
        self._table: dict[tuple[int, str, PublicHistory], dict[str, Number]] = {}
        for h in game.nonterminal_histories():
            for i in range(game.n):
                labels = game.action_set(i, h)
                for own in game.type_sets[i]:
                    key = (i, own, h)
                    dist = table.get(key)
                    if dist is None:
                        if len(labels) == 1:
                            self._table[key] = {labels[0]: 1}
                            continue
                        raise KeyError(
                            f"no distribution for player {game.players[i]} "
                            f"type {own} at {h!r}"
                        )
                    dist = {a: p for a, p in dist.items() if p != 0}
                    stray = set(dist) - set(labels)
                    if stray:
                        raise ValueError(
                            f"action {sorted(stray)[0]!r} not available to "
                            f"player {game.players[i]} at {h!r}"
                        )
                    total = sum(dist.values())
                    exact = is_exact(dist)
                    if (exact and total != 1) or (
                        not exact and abs(total - 1) > NORM_TOL
                    ):
                        raise ValueError(
                            f"distribution for player {game.players[i]} type "
                            f"{own} at {h!r} sums to {number_str(total)}"
                        )
                    if any(p < 0 for p in dist.values()):
                        raise ValueError("negative action probability")
                    self._table[key] = dict(dist)

    @classmethod
    def from_pure(
        cls,
        game: Game,
        assignment: Mapping[tuple[int, str, PublicHistory], str],
    ) -> "BehavioralStrategyProfile":
        return cls(game, {k: {a: 1} for k, a in assignment.items()})

    @classmethod
    def uniform(cls, game: Game) -> "BehavioralStrategyProfile":
        table = {}
        for h in game.nonterminal_histories():
            for i in range(game.n):
                labels = game.action_set(i, h)
                share = Fraction(1, len(labels)) if game.exact() else 1.0 / len(labels)
                for own in game.type_sets[i]:
                    table[(i, own, h)] = {a: share for a in labels}
        return cls(game, table)

    def prob(self, player: int, own_type: str, history: PublicHistory, action: str) -> Number:
        return self._table[(player, own_type, history)].get(action, 0)

    def dist(self, player: int, own_type: str, history: PublicHistory) -> dict[str, Number]:
        return dict(self._table[(player, own_type, history)])

    def support(self, player: int, own_type: str, history: PublicHistory) -> list[str]:
        dist = self._table[(player, own_type, history)]
        return [a for a in self.game.action_set(player, history) if dist.get(a, 0) > 0]

    @property
    def totally_mixed(self) -> bool:
        for (i, _own, h), dist in self._table.items():
            for a in self.game.action_set(i, h):
                if dist.get(a, 0) <= 0:
                    return False
        return True

    def with_action(
        self, player: int, own_type: str, history: PublicHistory, action: str
    ) -> "BehavioralStrategyProfile":
        """A copy with one information set switched to a pure action."""
        table = dict(self._table)
        table[(player, own_type, history)] = {action: 1}
        return BehavioralStrategyProfile(self.game, table)

    def to_float(self, game: Game | None = None) -> "BehavioralStrategyProfile":
        target = game if game is not None else self.game
        return BehavioralStrategyProfile(
            target,
            {k: {a: float(p) for a, p in d.items()} for k, d in self._table.items()},
        )

    def items(self):
        return self._table.items()

    def exact(self) -> bool:
        return all(is_exact(d) for d in self._table.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BehavioralStrategyProfile):
            return NotImplemented
        return self._table == other._table


class BeliefSystem:
    """Beliefs over opponents' type profiles per (player, type, history)."""

    def __init__(
        self,
        game: Game,
        table: Mapping[tuple[int, str, PublicHistory], Mapping[tuple[str, ...], Number]],
    ):
        self.game = game
        self._table = {k: dict(v) for k, v in table.items()}

    def belief(
        self, player: int, own_type: str, history: PublicHistory
    ) -> dict[tuple[str, ...], Number]:
        return dict(self._table[(player, own_type, history)])

    def items(self):
        return self._table.items()

    def __contains__(self, key) -> bool:
        return key in self._table
