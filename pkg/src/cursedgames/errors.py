"""Exception types shared across the solver modules."""

from __future__ import annotations


class CursedGamesError(Exception):
    """Base class for all errors raised by this package."""


class GameStructureError(CursedGamesError):
    """A game definition violates a structural requirement."""


class PriorNotFullSupport(GameStructureError):
    """The common prior assigns zero probability to some type profile."""


class PriorNotNormalized(GameStructureError):
    """The common prior does not sum to one."""


class EmptyActionSet(GameStructureError):
    """Some player has no available action at a reachable history."""


class MissingPayoff(GameStructureError):
    """A terminal history lacks a payoff entry for some type profile."""


class DanglingHistory(GameStructureError):
    """A payoff or action entry references a history not generated by the tree."""


class StageOutOfRange(GameStructureError):
    """A stage index or history pair is inconsistent with the horizon."""


class GameSyntaxError(CursedGamesError):
    """A game description file failed to parse.

    Carries the 1-based line and column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredLabel(GameSyntaxError):
    """A type or action label is used before being declared."""


class DuplicateDeclaration(GameSyntaxError):
    """The same entity is declared twice in a game description."""


class ZeroProbabilityObservation(CursedGamesError):
    """A belief update conditioned on an observation of probability zero."""


class RequiresTotallyMixed(CursedGamesError):
    """An operation requires a totally mixed strategy profile."""


class LimitDidNotStabilize(CursedGamesError):
    """Numeric tremble limits disagreed beyond tolerance across epsilon levels."""


class NotOneStage(CursedGamesError):
    """A one-stage-only operation was applied to a multi-stage game."""


class CombinatorialLimitExceeded(CursedGamesError):
    """An enumeration would exceed the supported combinatorial budget."""


class InvalidAlpha(CursedGamesError):
    """The cooperation payoff parameter is outside its admissible range."""


class InvalidEpsilon(CursedGamesError):
    """The type-correlation parameter is outside its admissible range."""


class InvalidY(CursedGamesError):
    """The follower payoff parameter is outside its admissible range."""


class UnknownClaim(CursedGamesError):
    """An unrecognized claim identifier was passed to the verifier."""
