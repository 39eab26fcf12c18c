"""Arithmetic helpers: exact rationals, tremble limits, tiny linear algebra.

Every solver in this package runs in one of two arithmetic modes.  In exact
mode all probabilities, payoffs and cursedness parameters are
``fractions.Fraction`` values and comparisons are exact.  In float mode the
same code paths run on ``float`` values and comparisons use a small
tolerance.  The mode is never a global switch: it is inferred from the values
actually flowing through a computation, so a game built from rationals checked
at a rational parameter is decided exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, float, Fraction]

#: Best-response slack tolerance used in float mode.
FLOAT_SLACK = 1e-9

#: Tolerance for distribution normalization checks in float mode.
NORM_TOL = 1e-12


def parse_number(text: str) -> Fraction:
    """Parse a numeric literal (``p/q``, integer or decimal) exactly."""
    text = text.strip()
    return Fraction(text)


def is_exact(*values: object) -> bool:
    """True when every numeric argument is an int or Fraction."""
    for v in values:
        if isinstance(v, bool):
            continue
        if isinstance(v, float):
            return False
        if isinstance(v, (int, Fraction)):
            continue
        if isinstance(v, (list, tuple)):
            if not is_exact(*v):
                return False
        elif isinstance(v, dict):
            if not is_exact(*v.values()):
                return False
    return True


def slack_tol(*values: object) -> Number:
    """Best-response tolerance appropriate for the given operands."""
    return 0 if is_exact(*values) else FLOAT_SLACK


def as_float(value: Number) -> float:
    return float(value)


def number_str(value: Number) -> str:
    """Render a number for reports: rationals as ``p/q``, floats via repr."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


class LimitTerm:
    """Leading term ``coeff * eps**order`` of a nonnegative quantity.

    Tremble limits in this package only ever divide, multiply and add
    quantities that are nonnegative for small positive eps (path measures,
    belief weights).  Sums of such quantities cannot cancel at the leading
    order, so the limit of any ratio is determined by leading terms alone.
    ``order is None`` encodes the identically-zero quantity.
    """

    __slots__ = ("order", "coeff")

    def __init__(self, order: int | None, coeff: Number):
        if order is None or coeff == 0:
            self.order = None
            self.coeff = 0
        else:
            self.order = order
            self.coeff = coeff

    @classmethod
    def zero(cls) -> "LimitTerm":
        return cls(None, 0)

    @classmethod
    def const(cls, value: Number) -> "LimitTerm":
        return cls(0, value)

    @classmethod
    def trembled(cls, prob: Number, direction: Number) -> "LimitTerm":
        """Leading term of ``(1-eps)*prob + eps*direction``."""
        if prob != 0:
            return cls(0, prob)
        return cls(1, direction)

    def is_zero(self) -> bool:
        return self.order is None

    def __mul__(self, other: "LimitTerm") -> "LimitTerm":
        if self.order is None or other.order is None:
            return LimitTerm.zero()
        return LimitTerm(self.order + other.order, self.coeff * other.coeff)

    def __add__(self, other: "LimitTerm") -> "LimitTerm":
        if self.order is None:
            return other
        if other.order is None:
            return self
        if self.order < other.order:
            return self
        if other.order < self.order:
            return other
        return LimitTerm(self.order, self.coeff + other.coeff)

    def scale(self, factor: Number) -> "LimitTerm":
        if self.order is None or factor == 0:
            return LimitTerm.zero()
        return LimitTerm(self.order, self.coeff * factor)

    def ratio_to(self, denominator: "LimitTerm") -> Number:
        """Limit of self/denominator as eps -> 0.

        Requires the denominator to dominate (self's order >= denominator's),
        which holds whenever self measures a sub-event of the denominator.
        """
        if denominator.order is None:
            raise ZeroDivisionError("limit ratio with identically-zero denominator")
        if self.order is None:
            return 0 * denominator.coeff
        if self.order > denominator.order:
            return 0 * denominator.coeff
        if self.order < denominator.order:
            raise ArithmeticError("limit ratio diverges; event is not a sub-event")
        return self.coeff / denominator.coeff

    def __repr__(self) -> str:  # pragma: no cover
        if self.order is None:
            return "LimitTerm(0)"
        return f"LimitTerm({self.coeff}*eps^{self.order})"


def limit_sum(terms: Iterable[LimitTerm]) -> LimitTerm:
    total = LimitTerm.zero()
    for t in terms:
        total = total + t
    return total


def solve_linear(matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]):
    """Solve a small square linear system by Gaussian elimination.

    Returns the solution vector, or None when the system is singular.  Works
    for Fraction and float entries alike; float pivoting uses magnitude.
    """
    n = len(rhs)
    # int entries are promoted so exact systems stay exact under division
    promote = lambda v: Fraction(v) if isinstance(v, int) else v
    a = [
        [promote(v) for v in row] + [promote(rhs[i])]
        for i, row in enumerate(matrix)
    ]
    for col in range(n):
        pivot = None
        best = 0.0
        for row in range(col, n):
            mag = abs(float(a[row][col]))
            if mag > best and mag > 1e-14:
                best = mag
                pivot = row
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        pivot_val = a[col][col]
        for row in range(n):
            if row == col:
                continue
            factor = a[row][col] / pivot_val
            if factor == 0:
                continue
            for k in range(col, n + 1):
                a[row][k] -= factor * a[col][k]
    return [a[i][n] / a[i][i] for i in range(n)]


def find_distribution(
    lower_bounds: Sequence[Number],
    inequalities: Sequence[tuple[Sequence[Number], Number]],
    tol: Number = 0,
):
    """Find a probability vector satisfying linear constraints, or None.

    Searches for ``x`` with ``sum(x) == 1``, ``x[k] >= lower_bounds[k]`` and
    ``sum(a[k]*x[k]) >= b`` for every ``(a, b)`` in ``inequalities``.  The
    feasible set is a bounded polytope, so when it is nonempty it has a vertex
    obtainable by making d-1 constraints active alongside the sum
    constraint; all such basic points are enumerated exactly.
    """
    d = len(lower_bounds)
    if d == 0:
        return None
    rows: list[tuple[list[Number], Number]] = []
    for k in range(d):
        unit = [0] * d
        unit[k] = 1
        rows.append((unit, lower_bounds[k]))
    for coeffs, b in inequalities:
        rows.append((list(coeffs), b))

    def feasible(x) -> bool:
        if any(v < lb - tol for v, lb in zip(x, lower_bounds)):
            return False
        for coeffs, b in inequalities:
            if sum(c * v for c, v in zip(coeffs, x)) < b - tol:
                return False
        return True

    if d == 1:
        x = [1]
        return x if feasible(x) else None

    ones = [1] * d
    for active in itertools.combinations(range(len(rows)), d - 1):
        matrix = [ones] + [rows[idx][0] for idx in active]
        rhs = [1] + [rows[idx][1] for idx in active]
        x = solve_linear(matrix, rhs)
        if x is None:
            continue
        if feasible(x):
            return x
    return None
