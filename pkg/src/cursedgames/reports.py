"""Result containers shared by the solvers and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import Number, number_str
from .game import BeliefSystem, PublicHistory


def _encode(value):
    if isinstance(value, dict):
        return {_key_text(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, PublicHistory):
        return str(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, float)) or hasattr(value, "denominator"):
        return number_str(value)
    return str(value)


def _key_text(key) -> str:
    if isinstance(key, tuple):
        return "|".join(_key_text(k) for k in key)
    if isinstance(key, PublicHistory):
        return str(key)
    return str(key)


@dataclass
class CheckFailure:
    """One violated optimality or consistency condition."""

    player: int
    own_type: str
    history: PublicHistory
    kind: str
    detail: str
    margin: Number | None = None

    def payload(self) -> dict:
        out = {
            "player": self.player + 1,
            "type": self.own_type,
            "history": str(self.history),
            "kind": self.kind,
            "detail": self.detail,
        }
        if self.margin is not None:
            out["margin"] = number_str(self.margin)
        return out


@dataclass
class EquilibriumReport:
    """Outcome of an equilibrium check for one strategy profile."""

    concept: str
    params: dict
    is_equilibrium: bool
    checked: int = 0
    failures: list[CheckFailure] = field(default_factory=list)
    free_witnesses: dict = field(default_factory=dict)
    approximate: bool = False
    notes: list[str] = field(default_factory=list)
    beliefs: BeliefSystem | None = None

    def payload(self, include_beliefs: bool = False) -> dict:
        out = {
            "concept": self.concept,
            "params": _encode(self.params),
            "is_equilibrium": self.is_equilibrium,
            "checked": self.checked,
            "failures": [f.payload() for f in self.failures],
            "approximate": self.approximate,
        }
        if self.free_witnesses:
            out["free_witnesses"] = _encode(self.free_witnesses)
        if self.notes:
            out["notes"] = list(self.notes)
        if include_beliefs and self.beliefs is not None:
            out["beliefs"] = _encode(
                {key: dict(b) for key, b in self.beliefs.items()}
            )
        return out


@dataclass
class ClaimReport:
    """One verified analytic statement, with expected and computed sides.

    ``runtime`` is informational and deliberately left out of the payload so
    repeated runs produce byte-identical output.
    """

    claim: str
    statement: str
    parameters: dict = field(default_factory=dict)
    expected: object = None
    computed: object = None
    passed: bool = False
    details: list[str] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)
    runtime: float | None = None

    def payload(self) -> dict:
        out = {
            "claim": self.claim,
            "statement": self.statement,
            "parameters": _encode(self.parameters),
            "expected": _encode(self.expected),
            "computed": _encode(self.computed),
            "passed": self.passed,
        }
        if self.details:
            out["details"] = list(self.details)
        if self.artifacts:
            out["artifacts"] = list(self.artifacts)
        return out
