"""Sequential cursed equilibrium with two-parameter misperception.

Each player carries a pair ``(chi_s, psi_s)``.  With weight
``chi_s * psi_s`` they reason about an opponent through that opponent's
information cell conditioned on everything the viewer knows (sequentially
cursed); with weight ``chi_s * (1 - psi_s)`` through the cell conditioned on
the viewer's type alone (typically cursed); with the remaining weight
``1 - chi_s`` they read the opponent's true type- and history-contingent
behavior (Bayesian).  Beliefs about types mix the same way, which collapses
to ``c*prior + (1-c)*posterior`` with ``c = chi_s*(1-psi_s)``.

Information cells pool all type profiles and merge histories a player cannot
tell apart from their own past actions and current action labels.  Relabeling
actions per history (see dsl.scramble) makes every cell a single history,
after which the concept meets its cursed-belief counterpart.

All conditional quantities are limits of a uniformly perturbed path measure,
taken symbolically through leading orders, so off-path conjectures are always
defined.  The optimality check asks, at every decision point, whether the
prescribed stage action begins some continuation plan that maximizes the
mixed three-world valuation; a backward pass over world-weighted type masses
answers that exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import FLOAT_SLACK, LimitTerm, find_distribution, is_exact, limit_sum
from .errors import CombinatorialLimitExceeded
from .game import BeliefSystem, Game, PublicHistory, conditional_prior
from .reports import CheckFailure, EquilibriumReport

__all__ = [
    "Partition",
    "coarsest_valid_partition",
    "check_phc",
    "SceAnalysis",
    "sce_belief",
    "expected_payoff_sce",
    "check_sce",
]

_NEUTRAL = "·"


@dataclass(frozen=True)
class Partition:
    """One player's information cells over (type profile, history) nodes."""

    player: int
    cells: tuple[frozenset, ...]

    def cell_index(self, history: PublicHistory) -> int:
        return self._by_history[history]

    def cell_of(self, types, history: PublicHistory) -> frozenset:
        return self.cells[self._by_history[history]]

    def __post_init__(self):
        by_history = {}
        for index, cell in enumerate(self.cells):
            for _types, h in cell:
                by_history[h] = index
        object.__setattr__(self, "_by_history", by_history)

    def histories(self, index: int):
        return sorted({h for _t, h in self.cells[index]})


def _effectively_scrambled(game: Game) -> bool:
    """Disjoint real-choice labels across same-stage histories, all players."""
    for stage in range(game.horizon):
        level = game.histories(stage)
        for i in range(game.n):
            seen = {}
            for h in level:
                labels = game.action_set(i, h)
                if len(labels) < 2:
                    continue
                for a in labels:
                    if a in seen and seen[a] != h:
                        return False
                    seen[a] = h
    return True


def coarsest_valid_partition(game: Game, player: int, force_phc: bool = False) -> Partition:
    """Merge nodes the player cannot distinguish, as coarsely as possible.

    Two nodes fall in one cell when they sit at the same stage, the player's
    own past action labels along them agree, and the player faces the same
    action labels now.  Labels of forced moves are treated as uninformative
    unless the game's real choices are relabeled per history.  Type profiles
    are always pooled.  ``force_phc`` refines by the full public history.
    """
    neutral = not _effectively_scrambled(game)
    groups: dict[tuple, list] = {}
    type_profiles = game.type_profiles()
    for stage in range(game.horizon):
        for h in game.histories(stage):
            own_seq = []
            for l in range(stage):
                prefix = h.prefix(l)
                label = h.actions[l][player]
                if neutral and len(game.action_set(player, prefix)) < 2:
                    label = _NEUTRAL
                own_seq.append(label)
            key = (stage, tuple(own_seq), game.action_set(player, h))
            if force_phc:
                key = key + (h,)
            groups.setdefault(key, []).append(h)
    cells = []
    for key in sorted(groups, key=lambda k: (k[0], str(k))):
        members = groups[key]
        cells.append(
            frozenset((types, h) for types in type_profiles for h in members)
        )
    return Partition(player, tuple(cells))


def check_phc(game: Game, partition: Partition | None = None, player: int | None = None) -> bool:
    """True when cells never pool distinct public histories.

    With no arguments past the game, every player's coarsest partition is
    required to have the property.
    """
    if partition is not None:
        parts = [partition]
    elif player is not None:
        parts = [coarsest_valid_partition(game, player)]
    else:
        parts = [coarsest_valid_partition(game, j) for j in range(game.n)]
    for part in parts:
        for cell in part.cells:
            if len({h for _t, h in cell}) > 1:
                return False
    return True


class SceAnalysis:
    """Cached partition, measure, and conjecture tables for one profile.

    Everything here is independent of ``(chi_s, psi_s)``; sweeping those
    parameters reuses one analysis.
    """

    def __init__(self, game: Game, sigma, force_phc: bool = False):
        self.game = game
        self.sigma = sigma
        self.force_phc = force_phc
        self.partitions = [
            coarsest_valid_partition(game, j, force_phc) for j in range(game.n)
        ]
        self._measure: dict = {}
        self._build_measure()
        self._tilde: dict = {}
        self._check: dict = {}
        self._point: dict = {}
        self._posterior: dict = {}
        self._future: dict = {}

    # -- perturbed path measure ---------------------------------------

    def _build_measure(self):
        game = self.game
        for types in game.type_profiles():
            self._measure[(types, PublicHistory())] = LimitTerm.const(
                game.prior[types]
            )
        for stage in range(game.horizon - 1):
            for h in game.histories(stage):
                for types in game.type_profiles():
                    base = self._measure[(types, h)]
                    for profile in game.joint_actions(h):
                        term = base
                        for k in range(game.n):
                            term = term * self._tremble(k, types[k], h, profile[k])
                        self._measure[(types, h.extend(profile))] = term

    def _tremble(self, player, own_type, h, action) -> LimitTerm:
        labels = self.game.action_set(player, h)
        share = (
            Fraction(1, len(labels)) if self.game.exact() else 1.0 / len(labels)
        )
        return LimitTerm.trembled(
            self.sigma.prob(player, own_type, h, action), share
        )

    def node_measure(self, types, history) -> LimitTerm:
        return self._measure[(types, history)]

    # -- conjectures --------------------------------------------------

    def sequential_conjecture(self, viewer, own_type, root, target, cell_index):
        """Target's conjectured stage behavior given all the viewer knows."""
        key = (viewer, own_type, root, target, cell_index)
        if key not in self._tilde:
            cell = self.partitions[target].cells[cell_index]
            nodes = [
                (types, h)
                for types, h in cell
                if types[viewer] == own_type and root.is_prefix_of(h)
            ]
            self._tilde[key] = self._event_conjecture(target, nodes)
        return self._tilde[key]

    def typical_conjecture(self, viewer, own_type, target, cell_index):
        """Target's conjectured stage behavior given the viewer's type only."""
        key = (viewer, own_type, target, cell_index)
        if key not in self._check:
            cell = self.partitions[target].cells[cell_index]
            nodes = [
                (types, h) for types, h in cell if types[viewer] == own_type
            ]
            self._check[key] = self._event_conjecture(target, nodes)
        return self._check[key]

    def _event_conjecture(self, target, nodes):
        if not nodes:
            return None
        labels = self.game.action_set(target, nodes[0][1])
        den = limit_sum(self._measure[node] for node in nodes)
        out = {}
        for a in labels:
            num = limit_sum(
                self._measure[(types, h)]
                * self._tremble(target, types[target], h, a)
                for types, h in nodes
            )
            out[a] = num.ratio_to(den)
        return out

    # -- type beliefs -------------------------------------------------

    def posterior(self, viewer, own_type, history):
        """Tremble-limit Bayesian type belief at (viewer's type, history)."""
        key = (viewer, own_type, history)
        if key not in self._posterior:
            opp_profiles = self.game.opponent_type_profiles(viewer)
            terms = {
                opp: self._measure[
                    (self.game.compose_types(viewer, own_type, opp), history)
                ]
                for opp in opp_profiles
            }
            den = limit_sum(terms.values())
            self._posterior[key] = {
                opp: t.ratio_to(den) for opp, t in terms.items()
            }
        return self._posterior[key]

    def off_path(self, viewer, own_type, history) -> bool:
        """True when the viewer's node has zero unperturbed probability."""
        opp_profiles = self.game.opponent_type_profiles(viewer)
        den = limit_sum(
            self._measure[
                (self.game.compose_types(viewer, own_type, opp), history)
            ]
            for opp in opp_profiles
        )
        return den.order != 0

    # -- world machinery ----------------------------------------------

    def worlds(self, chi_s, psi_s, viewer, own_type, history, beta=None):
        """Nonzero-weight worlds as (tag, weight, type belief) triples."""
        out = []
        seq_weight = chi_s * psi_s
        typ_weight = chi_s * (1 - psi_s)
        bay_weight = 1 - chi_s
        posterior = None
        if seq_weight != 0 or bay_weight != 0:
            posterior = beta if beta is not None else self.posterior(
                viewer, own_type, history
            )
        if seq_weight != 0:
            out.append(("seq", seq_weight, posterior))
        if typ_weight != 0:
            out.append(
                ("typ", typ_weight, conditional_prior(self.game, viewer, own_type))
            )
        if bay_weight != 0:
            out.append(("bay", bay_weight, posterior))
        return out

    def _factor(self, tag, viewer, own_type, root, target, types, h, action):
        if tag == "bay":
            return self.sigma.prob(target, types[target], h, action)
        cell_index = self.partitions[target].cell_index(h)
        if tag == "seq":
            row = self.sequential_conjecture(
                viewer, own_type, root, target, cell_index
            )
        else:
            row = self.typical_conjecture(viewer, own_type, target, cell_index)
        return row[action]

    def _opp_action_profiles(self, viewer, h):
        sets = [
            self.game.action_set(j, h)
            for j in range(self.game.n)
            if j != viewer
        ]
        return [tuple(p) for p in itertools.product(*sets)]

    def _stage_values(self, viewer, own_type, root, h, omega, maximize):
        """Backward pass over world-weighted opponent-type masses."""
        game = self.game
        if h.stage == game.horizon:
            total = 0
            for (tag, opp), mass in omega.items():
                if mass == 0:
                    continue
                types = game.compose_types(viewer, own_type, opp)
                total += mass * game.payoff(types, h)[viewer]
            return total
        opponents = [j for j in range(game.n) if j != viewer]
        values = {}
        for own_action in game.action_set(viewer, h):
            total = 0
            for opp_actions in self._opp_action_profiles(viewer, h):
                omega2 = {}
                alive = False
                for (tag, opp), mass in omega.items():
                    if mass == 0:
                        omega2[(tag, opp)] = 0
                        continue
                    types = game.compose_types(viewer, own_type, opp)
                    p = mass
                    for j, a in zip(opponents, opp_actions):
                        p = p * self._factor(
                            tag, viewer, own_type, root, j, types, h, a
                        )
                        if p == 0:
                            break
                    omega2[(tag, opp)] = p
                    alive = alive or p != 0
                if not alive:
                    continue
                profile = [None] * game.n
                profile[viewer] = own_action
                for j, a in zip(opponents, opp_actions):
                    profile[j] = a
                child = h.extend(tuple(profile))
                total += self._stage_values(
                    viewer, own_type, root, child, omega2, maximize
                )
            values[own_action] = total
        if h == root:
            return values
        if maximize:
            return max(values.values())
        return sum(
            self.sigma.prob(viewer, own_type, h, a) * v
            for a, v in values.items()
        )

    def action_values(self, chi_s, psi_s, viewer, own_type, root, beta=None,
                      maximize=True):
        """Mixed-world value of each stage action at one decision point.

        Continuation play after the stage is the best own plan when
        ``maximize`` (the optimality side), else the prescribed own strategy
        (the valuation side).
        """
        worlds = self.worlds(chi_s, psi_s, viewer, own_type, root, beta)
        opp_profiles = self.game.opponent_type_profiles(viewer)
        if not self.has_future_choice(viewer, root):
            # No later own choice: the value is linear in the world weights,
            # so reuse the cached one-world rows instead of a fresh pass.
            values = {a: 0 for a in self.game.action_set(viewer, root)}
            for tag, weight, belief in worlds:
                rows = self.point_values(viewer, own_type, root, tag)
                for opp in opp_profiles:
                    mass = weight * belief[opp]
                    if mass == 0:
                        continue
                    for a, v in rows[opp].items():
                        values[a] += mass * v
            return values
        omega = {}
        for tag, weight, belief in worlds:
            for opp in opp_profiles:
                omega[(tag, opp)] = weight * belief[opp]
        return self._stage_values(viewer, own_type, root, root, omega, maximize)

    def has_future_choice(self, viewer, root) -> bool:
        key = (viewer, root)
        if key not in self._future:
            found = False
            stack = list(self._children(root))
            while stack:
                h = stack.pop()
                if h.stage >= self.game.horizon:
                    continue
                if len(self.game.action_set(viewer, h)) > 1:
                    found = True
                    break
                stack.extend(self._children(h))
            self._future[key] = found
        return self._future[key]

    def _children(self, h):
        if h.stage >= self.game.horizon:
            return []
        return [h.extend(p) for p in self.game.joint_actions(h)]

    def point_values(self, viewer, own_type, root, tag):
        """Per opponent-type-profile action values for one world.

        Only valid when the viewer has no later real choice, which makes the
        world's value linear in the type belief.
        """
        key = (viewer, own_type, root, tag)
        if key not in self._point:
            rows = {}
            for opp in self.game.opponent_type_profiles(viewer):
                omega = {(tag, opp): 1}
                rows[opp] = self._stage_values(
                    viewer, own_type, root, root, omega, False
                )
            self._point[key] = rows
        return self._point[key]

    # -- enumeration cross-check --------------------------------------

    def _own_nodes(self, viewer, root):
        nodes = []
        stack = [root]
        while stack:
            h = stack.pop()
            if h.stage >= self.game.horizon:
                continue
            if len(self.game.action_set(viewer, h)) > 1:
                nodes.append(h)
            stack.extend(self._children(h))
        return sorted(nodes)

    def enumerate_action_values(self, chi_s, psi_s, viewer, own_type, root,
                                beta=None, limit=100_000):
        """action_values by brute force over pure continuation plans."""
        nodes = self._own_nodes(viewer, root)
        later = [h for h in nodes if h != root]
        size = 1
        for h in later:
            size *= len(self.game.action_set(viewer, h))
            if size > limit:
                raise CombinatorialLimitExceeded(
                    f"{size}+ continuation plans at {root!r}"
                )
        worlds = self.worlds(chi_s, psi_s, viewer, own_type, root, beta)
        out = {}
        for first in self.game.action_set(viewer, root):
            best = None
            for choice in itertools.product(
                *[self.game.action_set(viewer, h) for h in later]
            ):
                plan = dict(zip(later, choice))
                plan[root] = first
                total = 0
                for tag, weight, belief in worlds:
                    for opp in self.game.opponent_type_profiles(viewer):
                        mass = weight * belief[opp]
                        if mass == 0:
                            continue
                        total += mass * self._plan_value(
                            tag, viewer, own_type, root, opp, root, plan
                        )
                if best is None or total > best:
                    best = total
            out[first] = best
        return out

    def _plan_value(self, tag, viewer, own_type, root, opp, h, plan):
        game = self.game
        types = game.compose_types(viewer, own_type, opp)
        if h.stage == game.horizon:
            return game.payoff(types, h)[viewer]
        own_set = game.action_set(viewer, h)
        own_action = plan.get(h, own_set[0])
        opponents = [j for j in range(game.n) if j != viewer]
        total = 0
        for opp_actions in self._opp_action_profiles(viewer, h):
            p = 1
            for j, a in zip(opponents, opp_actions):
                p = p * self._factor(tag, viewer, own_type, root, j, types, h, a)
                if p == 0:
                    break
            if p == 0:
                continue
            profile = [None] * game.n
            profile[viewer] = own_action
            for j, a in zip(opponents, opp_actions):
                profile[j] = a
            total += p * self._plan_value(
                tag, viewer, own_type, root, opp, h.extend(tuple(profile)), plan
            )
        return total


def sce_belief(game, sigma, chi_s, psi_s, player, own_type, history,
               analysis: SceAnalysis | None = None):
    """Combined type belief at a decision point.

    Mixes the conditional prior (weight ``chi_s*(1-psi_s)``) with the
    tremble-limit Bayesian posterior (remaining weight).
    """
    analysis = analysis or SceAnalysis(game, sigma)
    c = chi_s * (1 - psi_s)
    posterior = analysis.posterior(player, own_type, history)
    prior = conditional_prior(game, player, own_type)
    return {
        opp: c * prior[opp] + (1 - c) * posterior[opp] for opp in prior
    }


def expected_payoff_sce(game, sigma, chi_s, psi_s, player, own_type, history,
                        analysis: SceAnalysis | None = None, beta=None,
                        force_phc: bool = False):
    """Mixed-world continuation value of the prescribed own play."""
    analysis = analysis or SceAnalysis(game, sigma, force_phc)
    values = analysis.action_values(
        chi_s, psi_s, player, own_type, history, beta=beta, maximize=False
    )
    return sum(
        sigma.prob(player, own_type, history, a) * v for a, v in values.items()
    )


def check_sce(
    game,
    sigma,
    chi_s,
    psi_s,
    *,
    force_phc: bool = False,
    analysis: SceAnalysis | None = None,
    method: str = "dp",
    grid_denominator: int = 6,
    tol=None,
):
    """Test a profile for sequential cursed equilibrium at ``(chi_s, psi_s)``.

    At every decision point the prescribed stage action must start a best
    continuation plan under the three-world valuation.  Off the path the
    Bayesian-posterior component is unrestricted; the checker searches for a
    supporting value, exactly when the point has no later own choice and by a
    rational grid otherwise (a failed grid search is marked approximate).
    ``method`` "enumerate" swaps the backward pass for brute-force plan
    enumeration (for cross-validation on small trees).
    """
    for value, name in ((chi_s, "chi_s"), (psi_s, "psi_s")):
        if not 0 <= value <= 1:
            raise ValueError(f"{name} must lie in [0, 1]")
    if method not in ("dp", "enumerate"):
        raise ValueError("method must be 'dp' or 'enumerate'")
    if analysis is None:
        analysis = SceAnalysis(game, sigma, force_phc)
    elif analysis.force_phc != force_phc:
        raise ValueError("analysis was built with a different force_phc")
    if tol is None:
        exact = (
            game.exact() and sigma.exact() and is_exact(chi_s) and is_exact(psi_s)
        )
        tol = 0 if exact else FLOAT_SLACK
    report = EquilibriumReport(
        concept="sce",
        params={"chi_s": chi_s, "psi_s": psi_s, "force_phc": force_phc},
        is_equilibrium=True,
    )
    # The posterior component carries weight 1 - chi_s*(1-psi_s); only when
    # that vanishes is there nothing free off the path.
    free_component = chi_s * (1 - psi_s) != 1
    for player in range(game.n):
        for own_type in game.type_sets[player]:
            for stage in range(game.horizon):
                for h in game.histories(stage):
                    if len(game.action_set(player, h)) < 2:
                        continue
                    report.checked += 1
                    _check_sce_point(
                        analysis, chi_s, psi_s, player, own_type, h,
                        report, method, grid_denominator, tol, free_component,
                    )
    table = {}
    for player in range(game.n):
        for own_type in game.type_sets[player]:
            for h in game.nonterminal_histories():
                if analysis.off_path(player, own_type, h):
                    continue
                table[(player, own_type, h)] = sce_belief(
                    game, sigma, chi_s, psi_s, player, own_type, h,
                    analysis=analysis,
                )
    report.beliefs = BeliefSystem(game, table)
    report.is_equilibrium = not report.failures
    return report


def _values(analysis, chi_s, psi_s, player, own_type, h, method, beta=None):
    if method == "enumerate":
        return analysis.enumerate_action_values(
            chi_s, psi_s, player, own_type, h, beta=beta
        )
    return analysis.action_values(
        chi_s, psi_s, player, own_type, h, beta=beta
    )


def _check_sce_point(analysis, chi_s, psi_s, player, own_type, h, report,
                     method, grid_denominator, tol, free_component):
    game = analysis.game
    sigma = analysis.sigma
    support = sigma.support(player, own_type, h)
    actions = game.action_set(player, h)
    if free_component and analysis.off_path(player, own_type, h):
        _check_sce_free(
            analysis, chi_s, psi_s, player, own_type, h, report,
            method, grid_denominator, tol, support, actions,
        )
        return
    values = _values(analysis, chi_s, psi_s, player, own_type, h, method)
    best = max(values.values())
    for a in support:
        if values[a] < best - tol:
            report.failures.append(CheckFailure(
                player, own_type, h, "not-a-best-plan-start",
                f"action {a!r} does not begin a best continuation plan",
                margin=best - values[a],
            ))


def _check_sce_free(analysis, chi_s, psi_s, player, own_type, h, report,
                    method, grid_denominator, tol, support, actions):
    game = analysis.game
    opp_profiles = game.opponent_type_profiles(player)
    if not analysis.has_future_choice(player, h):
        seq_w = chi_s * psi_s
        bay_w = 1 - chi_s
        typ_w = chi_s * (1 - psi_s)
        linear = {}
        constant = {a: 0 for a in actions}
        prior = conditional_prior(game, player, own_type)
        for opp in opp_profiles:
            linear[opp] = {a: 0 for a in actions}
        if seq_w != 0:
            rows = analysis.point_values(player, own_type, h, "seq")
            for opp in opp_profiles:
                for a in actions:
                    linear[opp][a] += seq_w * rows[opp][a]
        if bay_w != 0:
            rows = analysis.point_values(player, own_type, h, "bay")
            for opp in opp_profiles:
                for a in actions:
                    linear[opp][a] += bay_w * rows[opp][a]
        if typ_w != 0:
            rows = analysis.point_values(player, own_type, h, "typ")
            for a in actions:
                constant[a] = typ_w * sum(
                    prior[opp] * rows[opp][a] for opp in opp_profiles
                )
        inequalities = []
        for a_star in support:
            for a in actions:
                if a == a_star:
                    continue
                row = [
                    linear[opp][a_star] - linear[opp][a] for opp in opp_profiles
                ]
                inequalities.append((row, constant[a] - constant[a_star]))
        zero = Fraction(0) if game.exact() else 0.0
        witness = find_distribution(
            [zero] * len(opp_profiles), inequalities, tol=tol
        )
        if witness is None:
            report.failures.append(CheckFailure(
                player, own_type, h, "no-supporting-posterior",
                "no off-path posterior makes the prescribed play a best "
                "plan start",
            ))
        else:
            report.free_witnesses[(player, own_type, h)] = dict(
                zip(opp_profiles, witness)
            )
        return
    found = None
    for beta_parts in _simplex_grid(len(opp_profiles), grid_denominator):
        beta = dict(zip(opp_profiles, beta_parts))
        values = _values(
            analysis, chi_s, psi_s, player, own_type, h, method, beta=beta
        )
        best = max(values.values())
        if all(values[a] >= best - tol for a in support):
            found = beta
            break
    if found is None:
        report.approximate = True
        report.failures.append(CheckFailure(
            player, own_type, h, "no-supporting-posterior",
            "grid search over off-path posteriors found no support "
            f"(denominator {grid_denominator}); verdict is approximate",
        ))
    else:
        report.free_witnesses[(player, own_type, h)] = found


def _simplex_grid(k, denominator):
    for parts in itertools.combinations(range(denominator + k - 1), k - 1):
        cuts = (-1,) + parts + (denominator + k - 1,)
        yield tuple(
            Fraction(cuts[i + 1] - cuts[i] - 1, denominator) for i in range(k)
        )
