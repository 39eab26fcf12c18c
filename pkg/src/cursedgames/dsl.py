"""Line-oriented game description files.

Format (``#`` starts a comment, blank lines ignored)::

    game <name>
    players <n>
    types <i>: <label> <label> ...          # players with private types only
    prior: (<type labels>) = <number>       # one entry per type profile
    stage <t>:
      actions <i> at <pattern>: <label> ...  # pattern is * or an explicit path
    payoffs:
      (<type labels>, <path>) = (<u_1>, ..., <u_n>)
    scrambled: auto                          # optional: relabel per history

Players are 1-based indices.  Paths list only real movers' actions per stage,
e.g. ``(A)(L)``; players with singleton action sets are filled in
automatically.  Numbers are parsed exactly: ``p/q``, integers and decimal
literals all become rationals.  ``prior:`` and ``payoffs:`` accept an inline
entry or a block of following entry lines.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction

from .errors import (
    DanglingHistory,
    DuplicateDeclaration,
    GameSyntaxError,
    UndeclaredLabel,
)
from .game import (
    PASS,
    ROOT,
    UNTYPED,
    BehavioralStrategyProfile,
    Game,
    GameSpec,
    PublicHistory,
    build_game,
)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _split_first_colon(text: str):
    """Split at the first colon outside parentheses; None if there is none."""
    depth = 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == ":" and depth == 0:
            return text[:pos], text[pos + 1 :], pos
    return None


def _split_top_level(text: str, sep: str, lineno: int, base_col: int) -> list[tuple[str, int]]:
    """Split at top-level separators, keeping each part's start column."""
    parts: list[tuple[str, int]] = []
    depth = 0
    start = 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GameSyntaxError("unbalanced ')'", lineno, base_col + pos + 1)
        elif ch == sep and depth == 0:
            parts.append((text[start:pos], base_col + start + 1))
            start = pos + 1
    if depth != 0:
        raise GameSyntaxError("unbalanced '('", lineno, base_col + len(text))
    parts.append((text[start:], base_col + start + 1))
    return parts


def _parse_groups(text: str, lineno: int, base_col: int) -> list[tuple[list[str], int]]:
    """Parse a concatenation of ``(a,b,...)`` groups into label lists."""
    groups: list[tuple[list[str], int]] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "(":
            raise GameSyntaxError("expected '('", lineno, base_col + pos + 1)
        depth = 0
        for end in range(pos, n):
            if text[end] == "(":
                depth += 1
            elif text[end] == ")":
                depth -= 1
                if depth == 0:
                    break
        else:
            raise GameSyntaxError("unbalanced '('", lineno, base_col + pos + 1)
        inner = text[pos + 1 : end]
        if inner.strip():
            labels = [
                (part.strip(), col)
                for part, col in _split_top_level(inner, ",", lineno, base_col + pos + 1)
            ]
            for label, col in labels:
                if not label:
                    raise GameSyntaxError("empty label", lineno, col)
                if "(" in label:
                    raise GameSyntaxError("nested group not allowed here", lineno, col)
            groups.append(([label for label, _ in labels], base_col + pos + 1))
        else:
            groups.append(([], base_col + pos + 1))
        pos = end + 1
    return groups


def _parse_number(text: str, lineno: int, col: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise GameSyntaxError(f"bad number {text.strip()!r}", lineno, col) from None


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.name: str | None = None
        self.n: int | None = None
        self.type_lines: dict[int, list[str]] = {}
        self.prior_entries: list[tuple[list[str], Fraction, int, int]] = []
        self.stage_entries: dict[int, list] = {}
        self.payoff_entries: list = []
        self.scrambled_auto = False
        self.section: str | None = None
        self.current_stage: int | None = None

    def fail(self, message: str, lineno: int, col: int = 1):
        raise GameSyntaxError(message, lineno, col)

    def run(self) -> Game:
        any_content = False
        for lineno0, raw in enumerate(self.lines):
            line = _strip_comment(raw)
            if not line.strip():
                continue
            any_content = True
            self.dispatch(line, lineno0 + 1)
        if not any_content:
            self.fail("empty game description", 1)
        if self.name is None:
            self.fail("missing 'game' declaration", len(self.lines) or 1)
        if self.n is None:
            self.fail("missing 'players' declaration", len(self.lines) or 1)
        if not self.stage_entries:
            self.fail("no stage blocks declared", len(self.lines) or 1)
        return self.assemble()

    def dispatch(self, line: str, lineno: int):
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("("):
            if self.section == "prior":
                self.parse_prior_entry(stripped, lineno, indent)
            elif self.section == "payoffs":
                self.parse_payoff_entry(stripped, lineno, indent)
            else:
                self.fail("entry line outside prior/payoffs block", lineno, indent + 1)
            return
        word = stripped.split()[0]
        keyword = word.rstrip(":")
        if keyword == "game":
            self.section = None
            rest = stripped[len("game") :].strip()
            if not rest or len(rest.split()) != 1:
                self.fail("expected: game <name>", lineno, indent + 1)
            if self.name is not None:
                raise DuplicateDeclaration("game declared twice", lineno, indent + 1)
            self.name = rest
        elif keyword == "players":
            self.section = None
            rest = stripped[len("players") :].strip()
            if not rest.isdigit() or int(rest) < 1:
                self.fail("expected: players <n> with n >= 1", lineno, indent + 1)
            if self.n is not None:
                raise DuplicateDeclaration("players declared twice", lineno, indent + 1)
            self.n = int(rest)
        elif keyword == "types":
            self.section = None
            split = _split_first_colon(stripped)
            if split is None:
                self.fail("expected: types <i>: <labels>", lineno, indent + 1)
            head, rest, _ = split
            fields = head.split()
            if len(fields) != 2 or not fields[1].isdigit():
                self.fail("expected: types <i>: <labels>", lineno, indent + 1)
            player = int(fields[1])
            self.check_player(player, lineno, indent + 1)
            labels = rest.split()
            if not labels:
                self.fail("type list is empty", lineno, indent + 1)
            if len(set(labels)) != len(labels):
                raise DuplicateDeclaration(
                    f"duplicate type label for player {player}", lineno, indent + 1
                )
            if player in self.type_lines:
                raise DuplicateDeclaration(
                    f"types declared twice for player {player}", lineno, indent + 1
                )
            self.type_lines[player] = labels
        elif keyword == "prior":
            split = _split_first_colon(stripped)
            if split is None or split[0].strip() != "prior":
                self.fail("expected: prior: ...", lineno, indent + 1)
            self.section = "prior"
            rest = split[1].strip()
            if rest:
                self.parse_prior_entry(rest, lineno, indent + stripped.find(rest))
        elif keyword == "stage":
            split = _split_first_colon(stripped)
            if split is None:
                self.fail("expected: stage <t>:", lineno, indent + 1)
            head, rest, _ = split
            fields = head.split()
            if len(fields) != 2 or not fields[1].isdigit() or rest.strip():
                self.fail("expected: stage <t>:", lineno, indent + 1)
            stage = int(fields[1])
            if stage < 1:
                self.fail("stage numbers start at 1", lineno, indent + 1)
            if stage in self.stage_entries:
                raise DuplicateDeclaration(f"stage {stage} declared twice", lineno, indent + 1)
            self.stage_entries[stage] = []
            self.section = "stage"
            self.current_stage = stage
        elif keyword == "actions":
            if self.section != "stage" or self.current_stage is None:
                self.fail("'actions' outside a stage block", lineno, indent + 1)
            self.parse_actions(stripped, lineno, indent)
        elif keyword == "payoffs":
            split = _split_first_colon(stripped)
            if split is None or split[0].strip() != "payoffs":
                self.fail("expected: payoffs: ...", lineno, indent + 1)
            self.section = "payoffs"
            rest = split[1].strip()
            if rest:
                self.parse_payoff_entry(rest, lineno, indent + stripped.find(rest))
        elif keyword == "scrambled":
            self.section = None
            split = _split_first_colon(stripped)
            if split is None or split[1].strip() != "auto":
                self.fail("expected: scrambled: auto", lineno, indent + 1)
            self.scrambled_auto = True
        else:
            self.fail(f"unrecognized directive {word!r}", lineno, indent + 1)

    def check_player(self, player: int, lineno: int, col: int):
        if self.n is None:
            self.fail("player referenced before 'players' declaration", lineno, col)
        if not 1 <= player <= self.n:
            self.fail(f"player {player} out of range 1..{self.n}", lineno, col)

    def parse_actions(self, stripped: str, lineno: int, indent: int):
        split = _split_first_colon(stripped)
        if split is None:
            self.fail("expected: actions <i> at <pattern>: <labels>", lineno, indent + 1)
        head, rest, colon_pos = split
        match = re.match(r"actions\s+(\d+)\s+at\s*(.*)$", head.strip())
        if match is None:
            self.fail("expected: actions <i> at <pattern>: <labels>", lineno, indent + 1)
        player = int(match.group(1))
        self.check_player(player, lineno, indent + 1)
        pattern = match.group(2).strip()
        if not pattern:
            self.fail("missing history pattern", lineno, indent + 1)
        labels = rest.split()
        if not labels:
            self.fail("action list is empty", lineno, indent + colon_pos + 1)
        if len(set(labels)) != len(labels):
            raise DuplicateDeclaration("duplicate action label", lineno, indent + colon_pos + 1)
        if pattern != "*":
            groups = _parse_groups(pattern, lineno, indent + 1)
            pattern_value = [labels_ for labels_, _ in groups]
        else:
            pattern_value = "*"
        self.stage_entries[self.current_stage].append(
            (player - 1, pattern_value, tuple(labels), lineno, indent + 1)
        )

    def parse_prior_entry(self, text: str, lineno: int, col0: int):
        parts = _split_top_level(text, "=", lineno, col0)
        if len(parts) != 2:
            self.fail("expected: (<types>) = <number>", lineno, col0 + 1)
        left, lcol = parts[0]
        right, rcol = parts[1]
        groups = _parse_groups(left.strip(), lineno, lcol)
        if len(groups) != 1:
            self.fail("expected a single type tuple", lineno, lcol)
        labels = groups[0][0]
        value = _parse_number(right, lineno, rcol)
        self.prior_entries.append((labels, value, lineno, lcol))

    def parse_payoff_entry(self, text: str, lineno: int, col0: int):
        parts = _split_top_level(text, "=", lineno, col0)
        if len(parts) != 2:
            self.fail("expected: (<types>, <path>) = (<numbers>)", lineno, col0 + 1)
        left, lcol = parts[0]
        right, rcol = parts[1]
        left = left.strip()
        if not (left.startswith("(") and left.endswith(")")):
            self.fail("payoff key must be parenthesized", lineno, lcol)
        inner = left[1:-1]
        segments = _split_top_level(inner, ",", lineno, lcol + 1)
        type_labels: list[str] = []
        path_text = None
        path_col = lcol + 1
        for seg, scol in segments:
            seg_stripped = seg.strip()
            if seg_stripped == "()" and path_text is None and not type_labels:
                # empty type tuple: every player is untyped
                continue
            if "(" in seg_stripped:
                if path_text is not None:
                    # Path groups carry no top-level commas; a second segment
                    # with parentheses means a stray comma inside the key.
                    self.fail("unexpected ',' inside path", lineno, scol)
                path_text = seg_stripped
                path_col = scol
            elif seg_stripped:
                if path_text is not None:
                    self.fail("type labels must precede the path", lineno, scol)
                type_labels.append(seg_stripped)
        if path_text is None:
            self.fail("payoff key is missing a terminal path", lineno, lcol)
        path_groups = _parse_groups(path_text, lineno, path_col)
        values_text = right.strip()
        if not (values_text.startswith("(") and values_text.endswith(")")):
            self.fail("payoff values must be parenthesized", lineno, rcol)
        value_parts = _split_top_level(values_text[1:-1], ",", lineno, rcol + 1)
        values = tuple(_parse_number(part, lineno, pcol) for part, pcol in value_parts)
        self.payoff_entries.append(
            (type_labels, [g for g, _ in path_groups], values, lineno, lcol)
        )

    # -- assembly ------------------------------------------------------

    def assemble(self) -> Game:
        n = self.n
        assert n is not None and self.name is not None
        horizon = max(self.stage_entries)
        type_sets = []
        for i in range(n):
            labels = self.type_lines.get(i + 1)
            type_sets.append(tuple(labels) if labels else (UNTYPED,))
        typed_players = [i for i in range(n) if (i + 1) in self.type_lines]

        actions: dict[tuple[int, PublicHistory], tuple[str, ...]] = {}
        level: list[PublicHistory] = [ROOT]
        for t in range(1, horizon + 1):
            entries = self.stage_entries.get(t, [])
            wildcards: dict[int, tuple[str, ...]] = {}
            explicit: dict[tuple[int, PublicHistory], tuple[str, ...]] = {}
            for player, pattern, labels, lineno, col in entries:
                if pattern == "*":
                    if player in wildcards:
                        raise DuplicateDeclaration(
                            f"two wildcard action lines for player {player + 1} "
                            f"at stage {t}",
                            lineno,
                            col,
                        )
                    wildcards[player] = labels
                else:
                    h = self.resolve_path(pattern, t - 1, actions, lineno, col)
                    if (player, h) in explicit:
                        raise DuplicateDeclaration(
                            f"two action lines for player {player + 1} at "
                            f"history {h!r}",
                            lineno,
                            col,
                        )
                    explicit[(player, h)] = labels
            matched = set()
            next_level: list[PublicHistory] = []
            for h in level:
                for i in range(n):
                    labels = explicit.get((i, h))
                    if labels is not None:
                        matched.add((i, h))
                    else:
                        labels = wildcards.get(i, (PASS,))
                    actions[(i, h)] = labels
                sets = [actions[(i, h)] for i in range(n)]
                children = sorted(tuple(p) for p in itertools.product(*sets))
                next_level.extend(h.extend(p) for p in children)
            for (player, h), _labels in explicit.items():
                if (player, h) not in matched:
                    raise DanglingHistory(
                        f"action pattern for player {player + 1} at stage {t} "
                        f"matches no generated history"
                    )
            level = next_level

        prior: dict[tuple[str, ...], Fraction] = {}
        for labels, value, lineno, col in self.prior_entries:
            profile = self.type_tuple(labels, typed_players, type_sets, lineno, col)
            if profile in prior:
                raise DuplicateDeclaration(
                    f"duplicate prior entry for {labels}", lineno, col
                )
            prior[profile] = value
        if not typed_players and not prior:
            prior[tuple(UNTYPED for _ in range(n))] = Fraction(1)

        payoffs: dict[tuple[tuple[str, ...], PublicHistory], tuple[Fraction, ...]] = {}
        for type_labels, path_groups, values, lineno, col in self.payoff_entries:
            # Disambiguate the ((), path) form: a leading empty group acting
            # as the empty type tuple of an untyped game.
            groups = path_groups
            if (
                not type_labels
                and not typed_players
                and len(groups) == horizon + 1
                and groups[0] == []
            ):
                groups = groups[1:]
            profile = self.type_tuple(type_labels, typed_players, type_sets, lineno, col)
            if len(groups) != horizon:
                raise DanglingHistory(
                    f"payoff path has {len(groups)} stages, horizon is {horizon}"
                )
            h = ROOT
            for labels in groups:
                h = self.extend_by_movers(h, labels, actions, lineno, col)
            if len(values) != n:
                raise GameSyntaxError(
                    f"expected {n} payoff values, got {len(values)}", lineno, col
                )
            if (profile, h) in payoffs:
                raise DuplicateDeclaration(
                    f"duplicate payoff entry at {h!r}", lineno, col
                )
            payoffs[(profile, h)] = values

        game = build_game(
            GameSpec(
                name=self.name,
                players=tuple(str(i + 1) for i in range(n)),
                type_sets=type_sets,
                prior=prior,
                horizon=horizon,
                actions=actions,
                payoffs=payoffs,
            )
        )
        if self.scrambled_auto:
            game = scramble(game)
        return game

    def type_tuple(self, labels, typed_players, type_sets, lineno, col):
        labels = [l for l in labels if l]
        if len(labels) != len(typed_players):
            self.fail(
                f"expected {len(typed_players)} type labels, got {len(labels)}",
                lineno,
                col,
            )
        profile = [UNTYPED] * (self.n or 0)
        for label, player in zip(labels, typed_players):
            if label not in type_sets[player]:
                raise UndeclaredLabel(
                    f"unknown type {label!r} for player {player + 1}", lineno, col
                )
            profile[player] = label
        return tuple(profile)

    def resolve_path(self, groups, want_stage, actions, lineno, col):
        if len(groups) != want_stage:
            raise DanglingHistory(
                f"pattern has {len(groups)} stages, expected {want_stage}"
            )
        h = ROOT
        for labels in groups:
            h = self.extend_by_movers(h, labels, actions, lineno, col)
        return h

    def extend_by_movers(self, h, labels, actions, lineno, col):
        n = self.n
        assert n is not None
        sets = []
        for i in range(n):
            key = (i, h)
            if key not in actions:
                raise DanglingHistory(
                    f"path at {h!r} runs past the declared stage blocks"
                )
            sets.append(actions[key])
        movers = [i for i in range(n) if len(sets[i]) > 1]
        if len(labels) != len(movers):
            self.fail(
                f"stage tuple lists {len(labels)} actions, expected "
                f"{len(movers)} movers",
                lineno,
                col,
            )
        profile = [sets[i][0] for i in range(n)]
        for label, i in zip(labels, movers):
            if label not in sets[i]:
                raise UndeclaredLabel(
                    f"action {label!r} not available to player {i + 1} at {h!r}",
                    lineno,
                    col,
                )
            profile[i] = label
        return h.extend(tuple(profile))


def parse_game(text: str) -> Game:
    """Parse a game description into a validated Game."""
    return _Parser(text).run()


def parse_game_file(path) -> Game:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_game(fh.read())


def serialize_game(game: Game) -> str:
    """Render a game back to the description format, canonically.

    Parsing the output reproduces the game exactly: action sets equal across a
    whole stage collapse to a ``*`` pattern, singleton pass sets are omitted,
    everything else is written per history.
    """
    out: list[str] = [f"game {game.name}", f"players {game.n}"]
    typed = [i for i in range(game.n) if game.type_sets[i] != (UNTYPED,)]
    for i in typed:
        out.append(f"types {i + 1}: " + " ".join(game.type_sets[i]))
    if typed:
        for profile in game.type_profiles():
            shown = ",".join(profile[i] for i in typed)
            out.append(f"prior: ({shown}) = " + _num(game.prior[profile]))
    for t in range(1, game.horizon + 1):
        out.append(f"stage {t}:")
        level = game.histories(t - 1)
        for i in range(game.n):
            sets = [game.action_set(i, h) for h in level]
            if all(s == (PASS,) for s in sets):
                continue
            if len(set(sets)) == 1:
                out.append(f"  actions {i + 1} at *: " + " ".join(sets[0]))
            else:
                for h, s in zip(level, sets):
                    if s == (PASS,):
                        continue
                    pattern = game.history_text(h) or "()"
                    out.append(f"  actions {i + 1} at {pattern}: " + " ".join(s))
    out.append("payoffs:")
    typed_any = bool(typed)
    for profile in game.type_profiles():
        for h in game.terminal_histories():
            shown = ",".join(profile[i] for i in typed)
            key = f"({shown}, {game.history_text(h)})" if typed_any else (
                f"((), {game.history_text(h)})"
            )
            values = ", ".join(_num(v) for v in game.payoff(profile, h))
            out.append(f"  {key} = ({values})")
    return "\n".join(out) + "\n"


def _num(value) -> str:
    if isinstance(value, Fraction):
        return str(value) if value.denominator > 1 else str(value.numerator)
    return repr(value)


def scramble(game: Game) -> Game:
    """Relabel every action so that label sets differ across histories.

    Each label at history ``h`` (the ``idx``-th history of its stage) becomes
    ``label@h<stage>:<idx>``.  The relabeling applies to pass actions too, so
    a scrambled game keeps no shared labels anywhere within a stage.
    """
    new_actions: dict[tuple[int, PublicHistory], tuple[str, ...]] = {}
    hist_map: dict[PublicHistory, PublicHistory] = {ROOT: ROOT}
    for stage in range(game.horizon):
        for idx, h in enumerate(game.histories(stage)):
            nh = hist_map[h]
            suffix = f"@h{stage}:{idx}"
            for i in range(game.n):
                labels = game.action_set(i, h)
                new_actions[(i, nh)] = tuple(a + suffix for a in labels)
            for profile in game.joint_actions(h):
                new_profile = tuple(a + suffix for a in profile)
                hist_map[h.extend(profile)] = nh.extend(new_profile)
    new_payoffs = {
        (types, hist_map[h]): values
        for (types, h), values in game.payoffs.items()
    }
    return build_game(
        GameSpec(
            name=game.name + "-scrambled",
            players=game.players,
            type_sets=game.type_sets,
            prior=game.prior,
            horizon=game.horizon,
            actions=new_actions,
            payoffs=new_payoffs,
        )
    )


def is_scrambled(game: Game) -> bool:
    """True when same-stage histories never share an action label.

    Checks, for every player and every pair of distinct histories at the same
    stage, that the player's action label sets are disjoint.
    """
    for stage in range(game.horizon):
        level = game.histories(stage)
        for i in range(game.n):
            seen: dict[str, PublicHistory] = {}
            for h in level:
                for a in game.action_set(i, h):
                    if a in seen and seen[a] != h:
                        return False
                    seen[a] = h
    return True


def transport_profile(
    src: Game, dst: Game, profile: BehavioralStrategyProfile
) -> BehavioralStrategyProfile:
    """Carry a strategy profile across a relabeling of the same tree.

    Histories and actions are matched positionally (same action-set sizes in
    the same declared order), which is exactly the correspondence induced by
    :func:`scramble`.
    """
    if src.horizon != dst.horizon or src.n != dst.n or src.type_sets != dst.type_sets:
        raise ValueError("games do not share a tree shape")
    table: dict[tuple[int, str, PublicHistory], dict[str, object]] = {}
    frontier: list[tuple[PublicHistory, PublicHistory]] = [(ROOT, ROOT)]
    for _stage in range(src.horizon):
        next_frontier: list[tuple[PublicHistory, PublicHistory]] = []
        for hs, hd in frontier:
            label_maps = []
            for i in range(src.n):
                src_set = src.action_set(i, hs)
                dst_set = dst.action_set(i, hd)
                if len(src_set) != len(dst_set):
                    raise ValueError("games do not share a tree shape")
                label_maps.append(dict(zip(src_set, dst_set)))
                for own in src.type_sets[i]:
                    dist = profile.dist(i, own, hs)
                    table[(i, own, hd)] = {
                        label_maps[i][a]: p for a, p in dist.items()
                    }
            for joint in src.joint_actions(hs):
                mapped = tuple(label_maps[i][joint[i]] for i in range(src.n))
                next_frontier.append((hs.extend(joint), hd.extend(mapped)))
        frontier = next_frontier
    return BehavioralStrategyProfile(dst, table)


def base_label(label: str) -> str:
    """Strip scramble suffixes from an action label."""
    return label.split("@", 1)[0]


def resolve_label(labels, want: str) -> str:
    """Pick the action in ``labels`` named ``want``, exactly or by base.

    Lets profile constructors written against plain labels keep working on a
    scrambled game.  Raises ValueError unless the name identifies one action.
    """
    if want in labels:
        return want
    matches = [label for label in labels if base_label(label) == want]
    if len(matches) != 1:
        raise ValueError(
            f"label {want!r} does not identify one action among {tuple(labels)}"
        )
    return matches[0]
