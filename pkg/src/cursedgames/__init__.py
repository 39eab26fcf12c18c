"""Equilibrium checking for finite multi-stage games with observed actions.

The package models players whose beliefs about opponents' private types
are dampened toward type-independent play.  Two families of checks are
provided: stagewise checks against dampened Bayesian updates, and checks
against conjectures reconstructed from coarse observation cells, with a
per-world split between updated and non-updated belief components.
One-shot variants, example games, named-claim replays, parameter sweeps,
and a command-line front end round out the surface.
"""

from __future__ import annotations

from .arith import as_float, number_str, parse_number
from .cse import belief_node, belief_trajectory, check_cse, cursed_bayes_step
from .dsl import (
    base_label,
    is_scrambled,
    parse_game,
    parse_game_file,
    resolve_label,
    scramble,
    serialize_game,
    transport_profile,
)
from .errors import (
    CombinatorialLimitExceeded,
    CursedGamesError,
    GameStructureError,
    GameSyntaxError,
    InvalidAlpha,
    InvalidEpsilon,
    InvalidY,
    NotOneStage,
    RequiresTotallyMixed,
    UnknownClaim,
)
from .game import (
    ROOT,
    UNTYPED,
    BehavioralStrategyProfile,
    BeliefSystem,
    Game,
    GameSpec,
    PublicHistory,
    build_game,
)
from .one_stage import (
    ce_objective,
    check_ce,
    check_ice,
    enumerate_pure,
    ice_objective,
)
from .reports import CheckFailure, ClaimReport, EquilibriumReport
from .sce import SceAnalysis, check_phc, check_sce, sce_belief
from .scenarios import (
    CLAIM_IDS,
    RegionMap,
    announcement_belief,
    broadcaster_cse_profile,
    broadcaster_game,
    broadcaster_sce_profile,
    cutoff_cse,
    cutoff_sce,
    matching_game,
    matching_profile,
    perfect_info_game,
    perfect_info_profile,
    region_map,
    reliance_threshold,
    signaling_game,
    signaling_profile,
    verify_claim,
    write_region_csv,
)

__all__ = [
    "ROOT",
    "UNTYPED",
    "BehavioralStrategyProfile",
    "BeliefSystem",
    "CLAIM_IDS",
    "CheckFailure",
    "ClaimReport",
    "CombinatorialLimitExceeded",
    "CursedGamesError",
    "EquilibriumReport",
    "Game",
    "GameSpec",
    "GameStructureError",
    "GameSyntaxError",
    "InvalidAlpha",
    "InvalidEpsilon",
    "InvalidY",
    "NotOneStage",
    "PublicHistory",
    "RegionMap",
    "RequiresTotallyMixed",
    "SceAnalysis",
    "UnknownClaim",
    "announcement_belief",
    "as_float",
    "base_label",
    "belief_node",
    "belief_trajectory",
    "broadcaster_cse_profile",
    "broadcaster_game",
    "broadcaster_sce_profile",
    "build_game",
    "ce_objective",
    "check_ce",
    "check_cse",
    "check_ice",
    "check_phc",
    "check_sce",
    "cursed_bayes_step",
    "cutoff_cse",
    "cutoff_sce",
    "enumerate_pure",
    "ice_objective",
    "is_scrambled",
    "matching_game",
    "matching_profile",
    "number_str",
    "parse_game",
    "parse_game_file",
    "parse_number",
    "perfect_info_game",
    "perfect_info_profile",
    "region_map",
    "reliance_threshold",
    "resolve_label",
    "scramble",
    "serialize_game",
    "signaling_game",
    "signaling_profile",
    "transport_profile",
    "verify_claim",
    "write_region_csv",
]

__version__ = "0.1.0"
