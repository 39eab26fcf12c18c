"""Command-line front end.

Subcommands mirror the library surface: ``parse`` validates a game file
and echoes its canonical form, ``check`` tests one profile under one
solution concept, ``enumerate`` filters all pure profiles, ``scramble``
relabels a tree, ``scenario`` emits a built-in game, ``verify`` replays a
named prediction, and ``regions`` sweeps a parameter grid to CSV and PNG.

Standard out is deterministic for identical invocations; runtime
statistics go to standard error.  Exit status is 0 on success (``check``
reports its verdict in the payload, not the status), 1 when ``verify``
finds a mismatch, and 2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .arith import as_float, parse_number
from .cse import check_cse
from .dsl import parse_game_file, resolve_label, scramble, serialize_game
from .errors import CursedGamesError, UnknownClaim
from .game import BehavioralStrategyProfile
from .one_stage import check_ce, check_ice, enumerate_pure
from .plots import render_region_map
from .sce import check_sce
from .scenarios import (
    CLAIM_IDS,
    broadcaster_game,
    matching_game,
    perfect_info_game,
    region_map,
    signaling_game,
    verify_claim,
    write_region_csv,
)

CONCEPTS = ("cse", "sce", "ce", "ice")
SCENARIO_NAMES = ("signaling", "perfect-info", "matching", "broadcaster")
REGION_CLAIMS = ("C3", "C6", "C7")
THREADS_ENV = "CURSED_GAMES_THREADS"


class UsageError(Exception):
    """Bad invocation: reported on standard error with exit status 2."""


@dataclass
class RunConfig:
    """Validated parameters shared by the profile-checking commands."""

    subcommand: str
    input: str | None = None
    concept: str | None = None
    chi: Fraction | float | None = None
    chi_s: Fraction | float | None = None
    psi_s: Fraction | float | None = None
    exact: bool = False
    force_phc: bool = False
    full_deviations: bool = False
    out: str | None = None
    threads: int = 1


_CONCEPT_PARAMS = {
    "cse": ("chi",),
    "ce": ("chi",),
    "sce": ("chi_s", "psi_s"),
    "ice": (),
}


def _resolve_threads(requested) -> int:
    if requested is not None:
        return max(1, requested)
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_config(args) -> RunConfig:
    cfg = RunConfig(
        subcommand=args.command,
        input=getattr(args, "input", None),
        concept=getattr(args, "concept", None),
        chi=getattr(args, "chi", None),
        chi_s=getattr(args, "chi_s", None),
        psi_s=getattr(args, "psi_s", None),
        exact=getattr(args, "exact", False),
        force_phc=getattr(args, "force_phc", False),
        full_deviations=getattr(args, "full_deviations", False),
        out=getattr(args, "out", None),
        threads=_resolve_threads(getattr(args, "threads", None)),
    )
    if cfg.concept is not None:
        wanted = _CONCEPT_PARAMS[cfg.concept]
        for name in wanted:
            if getattr(cfg, name) is None:
                raise UsageError(
                    f"--concept {cfg.concept} requires"
                    f" --{name.replace('_', '-')}"
                )
        for name in ("chi", "chi_s", "psi_s"):
            value = getattr(cfg, name)
            if value is None:
                continue
            if name not in wanted:
                raise UsageError(
                    f"--{name.replace('_', '-')} does not apply to"
                    f" --concept {cfg.concept}"
                )
            if not 0 <= value <= 1:
                raise UsageError(
                    f"--{name.replace('_', '-')} must lie in [0, 1]"
                )
        if cfg.force_phc and cfg.concept != "sce":
            raise UsageError("--force-phc applies only to --concept sce")
        if cfg.full_deviations and cfg.concept != "cse":
            raise UsageError(
                "--full-deviations applies only to --concept cse"
            )
        if not cfg.exact:
            for name in ("chi", "chi_s", "psi_s"):
                value = getattr(cfg, name)
                if value is not None:
                    setattr(cfg, name, as_float(value))
    return cfg


# -- profile input ----------------------------------------------------


def _profile_slots(game):
    """Real-choice slots in shorthand order: one group per (stage, player)."""
    groups = []
    for stage in range(game.horizon):
        level = game.histories(stage)
        for i in range(game.n):
            slots = [
                (i, own, h)
                for own in game.type_sets[i]
                for h in level
                if len(game.action_set(i, h)) > 1
            ]
            if slots:
                groups.append(slots)
    return groups


def _resolve(labels, want):
    try:
        return resolve_label(labels, want)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_profile_shorthand(game, text: str) -> BehavioralStrategyProfile:
    """Pure profile from the compact form, e.g. ``[(B,B);(L,R)]``.

    Groups separated by ``;`` cover, stage by stage, each player with a
    real choice; items inside a group run through that player's types and
    then the stage's histories.  Base labels are accepted on scrambled
    trees.
    """
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise UsageError(f"profile shorthand must be bracketed: {text!r}")
    groups_text = [g.strip() for g in body[1:-1].split(";")]
    groups = _profile_slots(game)
    if len(groups_text) != len(groups):
        raise UsageError(
            f"profile shorthand has {len(groups_text)} groups, this game"
            f" needs {len(groups)}"
        )
    assignment = {}
    for raw, slots in zip(groups_text, groups):
        inner = raw
        if inner.startswith("(") and inner.endswith(")"):
            inner = inner[1:-1]
        items = [p.strip() for p in inner.split(",")] if inner else []
        if len(items) != len(slots):
            raise UsageError(
                f"group {raw!r} lists {len(items)} actions, expected"
                f" {len(slots)}"
            )
        for (player, own, h), want in zip(slots, items):
            assignment[(player, own, h)] = _resolve(
                game.action_set(player, h), want
            )
    return BehavioralStrategyProfile.from_pure(game, assignment)


def profile_shorthand(game, sigma) -> str:
    """Inverse of :func:`parse_profile_shorthand` for pure profiles."""
    groups = []
    for slots in _profile_slots(game):
        names = []
        for player, own, h in slots:
            support = sigma.support(player, own, h)
            if len(support) != 1:
                raise ValueError("only pure profiles have a shorthand form")
            names.append(support[0])
        groups.append(
            names[0] if len(names) == 1 else "(" + ",".join(names) + ")"
        )
    return "[" + ";".join(groups) + "]"


def _profile_from_mapping(game, data, exact):
    if not isinstance(data, dict):
        raise UsageError("profile JSON must be an object")
    index = {}
    for h in game.nonterminal_histories():
        for i in range(game.n):
            for own in game.type_sets[i]:
                key = f"{game.players[i]}|{own}|{game.history_text(h)}"
                index[key] = (i, own, h)
    table = {}
    for key in sorted(data):
        slot = index.get(key)
        if slot is None:
            raise UsageError(
                f"profile entry {key!r} matches no decision point"
            )
        player, _own, h = slot
        labels = game.action_set(player, h)
        value = data[key]
        if isinstance(value, str):
            table[slot] = {_resolve(labels, value): 1}
        elif isinstance(value, dict):
            dist = {}
            for label, prob in value.items():
                p = parse_number(str(prob))
                dist[_resolve(labels, label)] = p if exact else as_float(p)
            table[slot] = dist
        else:
            raise UsageError(
                f"profile entry {key!r} must map to an action name or a"
                " distribution object"
            )
    try:
        return BehavioralStrategyProfile(game, table)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def load_profile(game, text: str, exact: bool) -> BehavioralStrategyProfile:
    """Profile from shorthand, inline JSON, or a JSON file path."""
    body = text.strip()
    if body.startswith("["):
        return parse_profile_shorthand(game, body)
    if body.startswith("{"):
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            raise UsageError(f"profile JSON does not parse: {exc}") from None
        return _profile_from_mapping(game, data, exact)
    try:
        raw = Path(body).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read profile file: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"profile JSON does not parse: {exc}") from None
    return _profile_from_mapping(game, data, exact)


# -- subcommands ------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_parse(args) -> int:
    game = parse_game_file(args.input)
    _emit(serialize_game(game), None)
    return 0


def _run_check(game, sigma, cfg: RunConfig):
    if cfg.concept == "cse":
        return check_cse(
            game, sigma, cfg.chi, full_deviations=cfg.full_deviations
        )
    if cfg.concept == "sce":
        return check_sce(
            game, sigma, cfg.chi_s, cfg.psi_s, force_phc=cfg.force_phc
        )
    if cfg.concept == "ce":
        return check_ce(game, sigma, cfg.chi)
    return check_ice(game, sigma)


def _cmd_check(args) -> int:
    cfg = _run_config(args)
    game = parse_game_file(cfg.input)
    sigma = load_profile(game, args.profile, cfg.exact)
    report = _run_check(game, sigma, cfg)
    payload = report.payload(include_beliefs=args.beliefs)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_enumerate(args) -> int:
    cfg = _run_config(args)
    game = parse_game_file(cfg.input)
    passing = 0
    total = 0
    for profile in enumerate_pure(game, limit=args.limit):
        total += 1
        if _run_check(game, profile, cfg).is_equilibrium:
            passing += 1
            print(profile_shorthand(game, profile))
    print(
        f"{passing} of {total} pure profiles pass", file=sys.stderr
    )
    return 0


def _cmd_scramble(args) -> int:
    game = parse_game_file(args.input)
    _emit(serialize_game(scramble(game)), args.out)
    return 0


def _build_scenario(args):
    name = args.name
    scrambled = (args.scrambled or name == "broadcaster") and not args.plain
    if name == "signaling":
        return signaling_game(scrambled=scrambled)
    if name == "perfect-info":
        return perfect_info_game(args.x, args.y)
    if name == "matching":
        return matching_game(args.epsilon)
    return broadcaster_game(args.n, args.alpha, scrambled=scrambled)


def _cmd_scenario(args) -> int:
    _emit(serialize_game(_build_scenario(args)), args.out)
    return 0


def _cmd_verify(args) -> int:
    claims = list(args.claims)
    if claims == ["all"]:
        claims = list(CLAIM_IDS)
    for claim in claims:
        if claim not in CLAIM_IDS:
            raise UnknownClaim(
                f"unknown claim {claim!r}; available:"
                f" {', '.join(CLAIM_IDS)} or all"
            )

    def run(claim):
        kwargs = {}
        if args.resolution is not None and claim in ("C3", "C5", "C6"):
            kwargs["resolution"] = args.resolution
        return verify_claim(claim, **kwargs)

    threads = _resolve_threads(args.threads)
    if threads > 1 and len(claims) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, claims))
    else:
        reports = [run(claim) for claim in claims]
    failures = 0
    for report in reports:
        print(json.dumps(report.payload(), indent=2, sort_keys=True))
        print(
            f"{report.claim}: {'pass' if report.passed else 'FAIL'}"
            f" ({report.runtime:.2f}s)",
            file=sys.stderr,
        )
        failures += 0 if report.passed else 1
    return 1 if failures else 0


def _cmd_regions(args) -> int:
    region = region_map(args.claim, resolution=args.grid)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = args.stem or f"{args.claim.lower()}-regions"
    csv_path = out_dir / f"{stem}.csv"
    png_path = out_dir / f"{stem}.png"
    write_region_csv(region, csv_path)
    render_region_map(region, png_path)
    print(csv_path)
    print(png_path)
    return 0


# -- parser -----------------------------------------------------------


def _number(text: str):
    try:
        return parse_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_concept_arguments(sub) -> None:
    sub.add_argument(
        "--concept", required=True, choices=CONCEPTS,
        help="solution concept to test",
    )
    sub.add_argument(
        "--chi", type=_number,
        help="cursedness weight for cse/ce, in [0, 1]",
    )
    sub.add_argument(
        "--chi-s", type=_number,
        help="composite cursedness weight for sce, in [0, 1]",
    )
    sub.add_argument(
        "--psi-s", type=_number,
        help="sequential share for sce, in [0, 1]",
    )
    sub.add_argument(
        "--exact", action="store_true",
        help="keep rational arithmetic end to end",
    )
    sub.add_argument(
        "--force-phc", action="store_true",
        help="sce only: refine observation cells by the full history",
    )
    sub.add_argument(
        "--full-deviations", action="store_true",
        help="cse only: test multi-stage deviations too",
    )
    sub.add_argument(
        "--threads", type=int,
        help=f"worker cap (default ${THREADS_ENV} or 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cursedgames",
        description="check, enumerate, and sweep cursed-belief equilibria",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate a game file, echo canonical form")
    p.add_argument("input", help="game description file")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("check", help="test one profile under one concept")
    p.add_argument("input", help="game description file")
    p.add_argument(
        "--profile", required=True,
        help="pure shorthand like [(B,B);(L,R)], inline JSON"
        " {\"player|type|history\": action-or-distribution}, or a JSON file",
    )
    p.add_argument(
        "--beliefs", action="store_true",
        help="include the belief system in the payload",
    )
    _add_concept_arguments(p)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("enumerate", help="list pure profiles passing a concept")
    p.add_argument("input", help="game description file")
    p.add_argument(
        "--limit", type=int, default=100_000,
        help="refuse to enumerate more pure profiles than this",
    )
    _add_concept_arguments(p)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("scramble", help="relabel every action distinctly")
    p.add_argument("input", help="game description file")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.set_defaults(handler=_cmd_scramble)

    p = sub.add_parser("scenario", help="emit a built-in example game")
    p.add_argument("name", choices=SCENARIO_NAMES)
    p.add_argument("--alpha", type=_number, default=Fraction(1, 2),
                   help="broadcaster reliance payoff (default 1/2)")
    p.add_argument("--epsilon", type=_number, default=Fraction(1, 10),
                   help="matching-game mismatch weight (default 1/10)")
    p.add_argument("--x", type=_number, default=Fraction(3),
                   help="perfect-info (R, b) payoff to the first mover")
    p.add_argument("--y", type=_number, default=Fraction(0),
                   help="perfect-info (R, b) payoff to the responder")
    p.add_argument("--n", type=int, default=2,
                   help="broadcaster listener count (default 2)")
    flip = p.add_mutually_exclusive_group()
    flip.add_argument("--scrambled", action="store_true",
                      help="relabel actions distinctly per history")
    flip.add_argument("--plain", action="store_true",
                      help="keep original labels (broadcaster default is"
                      " scrambled)")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.set_defaults(handler=_cmd_scenario)

    p = sub.add_parser("verify", help="replay named predictions end to end")
    p.add_argument(
        "claims", nargs="+", metavar="claim",
        help=f"claim ids ({', '.join(CLAIM_IDS)}) or all",
    )
    p.add_argument("--resolution", type=int,
                   help="grid override for the sweeping claims")
    p.add_argument("--threads", type=int,
                   help=f"worker cap (default ${THREADS_ENV} or 1)")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("regions", help="sweep a claim's regions to CSV and PNG")
    p.add_argument("claim", choices=REGION_CLAIMS)
    p.add_argument("--grid", type=int, default=100,
                   help="grid resolution per axis (default 100)")
    p.add_argument("--out-dir", default=".",
                   help="directory for the CSV and PNG files")
    p.add_argument("--stem", help="base file name (default <claim>-regions)")
    p.set_defaults(handler=_cmd_regions)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        status = args.handler(args)
    except (UsageError, CursedGamesError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"{args.command} finished in {time.perf_counter() - start:.3f}s",
        file=sys.stderr,
    )
    return status


def console_main() -> None:
    sys.exit(main())
