"""Command-line behavior: exit codes, output discipline, profile input."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from cursedgames import cli, is_scrambled, parse_game, signaling_game
from cursedgames.cli import (
    load_profile,
    main,
    parse_profile_shorthand,
    profile_shorthand,
)

FIXTURE = str(
    Path(__file__).parent.parent / "src/cursedgames/fixtures/signaling.game"
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParse:
    def test_echoes_canonical_form(self, capsys):
        code, out, err = run(capsys, "parse", FIXTURE)
        assert code == 0
        assert out == Path(FIXTURE).read_text(encoding="utf-8")
        assert "finished" in err

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "parse", "/does/not/exist.game")
        assert code == 2
        assert out == ""
        assert "error:" in err

    def test_syntax_error_position_reported(self, tmp_path, capsys):
        bad = tmp_path / "bad.game"
        bad.write_text("game x\nplayers zero\n")
        code, out, err = run(capsys, "parse", str(bad))
        assert code == 2
        assert "line 2" in err


class TestCheck:
    def test_shorthand_profile_verdict(self, capsys):
        code, out, err = run(
            capsys, "check", FIXTURE, "--concept", "cse",
            "--profile", "[(B,B);(R,R)]", "--chi", "8/9", "--exact",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["is_equilibrium"] is True
        assert payload["params"]["chi"] == "8/9"

    def test_float_mode_default(self, capsys):
        code, out, _ = run(
            capsys, "check", FIXTURE, "--concept", "cse",
            "--profile", "[(B,B);(R,R)]", "--chi", "0.95",
        )
        assert code == 0
        assert json.loads(out)["is_equilibrium"] is False

    def test_sce_needs_both_parameters(self, capsys):
        code, _, err = run(
            capsys, "check", FIXTURE, "--concept", "sce",
            "--profile", "[(A,A);(L,R)]", "--chi-s", "1/3",
        )
        assert code == 2
        assert "--psi-s" in err

    def test_chi_rejected_for_sce(self, capsys):
        code, _, err = run(
            capsys, "check", FIXTURE, "--concept", "sce",
            "--profile", "[(A,A);(L,R)]", "--chi-s", "1/3",
            "--psi-s", "0", "--chi", "1/2",
        )
        assert code == 2
        assert "--chi" in err

    def test_parameter_range(self, capsys):
        code, _, err = run(
            capsys, "check", FIXTURE, "--concept", "cse",
            "--profile", "[(A,A);(L,R)]", "--chi", "3/2",
        )
        assert code == 2
        assert "[0, 1]" in err

    def test_force_phc_requires_sce(self, capsys):
        code, _, err = run(
            capsys, "check", FIXTURE, "--concept", "cse",
            "--profile", "[(A,A);(L,R)]", "--chi", "0", "--force-phc",
        )
        assert code == 2

    def test_inline_json_profile(self, capsys):
        profile = json.dumps({
            "1|t1|": "A",
            "1|t2|": "A",
            "2|-|(A)": {"L": "1", "R": "0"},
            "2|-|(B)": "R",
        })
        code, out, _ = run(
            capsys, "check", FIXTURE, "--concept", "cse",
            "--profile", profile, "--chi", "1/2", "--exact",
        )
        assert code == 0
        assert json.loads(out)["is_equilibrium"] is True

    def test_bad_profile_key(self, capsys):
        code, _, err = run(
            capsys, "check", FIXTURE, "--concept", "cse",
            "--profile", json.dumps({"nobody|t|": "A"}), "--chi", "0",
        )
        assert code == 2
        assert "decision point" in err

    def test_beliefs_flag_adds_section(self, capsys):
        code, out, _ = run(
            capsys, "check", FIXTURE, "--concept", "sce",
            "--profile", "[(B,B);(R,R)]", "--chi-s", "8/9",
            "--psi-s", "0", "--exact", "--beliefs",
        )
        assert code == 0
        assert "beliefs" in json.loads(out)

    def test_stdout_deterministic(self, capsys):
        args = (
            "check", FIXTURE, "--concept", "ce",
            "--profile", "[(A,A);(L,R)]", "--chi", "1",
        )
        # one-stage concepts refuse the two-stage fixture: still exit 2
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 2
        assert out1 == out2 == ""


class TestEnumerate:
    def test_lists_equilibria_in_shorthand(self, capsys):
        code, out, err = run(
            capsys, "enumerate", FIXTURE, "--concept", "cse",
            "--chi", "1/2", "--exact",
        )
        assert code == 0
        assert out.splitlines() == ["[(A,A);(L,R)]", "[(B,B);(R,R)]"]
        assert "16 pure profiles" in err

    def test_limit_guard(self, capsys):
        code, _, err = run(
            capsys, "enumerate", FIXTURE, "--concept", "cse",
            "--chi", "0", "--limit", "3",
        )
        assert code == 2


class TestScramble:
    def test_output_parses_scrambled(self, capsys):
        code, out, _ = run(capsys, "scramble", FIXTURE)
        assert code == 0
        assert is_scrambled(parse_game(out))

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "mixed.game"
        code, out, _ = run(capsys, "scramble", FIXTURE, "--out", str(target))
        assert code == 0
        assert out == ""
        assert is_scrambled(parse_game(target.read_text()))


class TestScenario:
    @pytest.mark.parametrize("name", cli.SCENARIO_NAMES)
    def test_each_builds(self, capsys, name):
        code, out, _ = run(capsys, "scenario", name)
        assert code == 0
        parse_game(out)

    def test_broadcaster_scrambled_by_default(self, capsys):
        _, out, _ = run(capsys, "scenario", "broadcaster")
        assert is_scrambled(parse_game(out))
        _, out, _ = run(capsys, "scenario", "broadcaster", "--plain")
        assert not is_scrambled(parse_game(out))

    def test_signaling_plain_by_default(self, capsys):
        _, out, _ = run(capsys, "scenario", "signaling")
        assert not is_scrambled(parse_game(out))
        _, out, _ = run(capsys, "scenario", "signaling", "--scrambled")
        assert is_scrambled(parse_game(out))

    def test_guard_surfaces_as_exit_two(self, capsys):
        code, _, err = run(capsys, "scenario", "perfect-info", "--y", "1")
        assert code == 2
        assert "error:" in err

    def test_epsilon_parameter(self, capsys):
        code, out, _ = run(
            capsys, "scenario", "matching", "--epsilon", "1/6"
        )
        assert code == 0
        game = parse_game(out)
        assert game.prior[("h", "t", "-")] == Fraction(1, 6)


class TestVerify:
    def test_single_claim_passes(self, capsys):
        code, out, err = run(capsys, "verify", "C7")
        assert code == 0
        payload = json.loads(out)
        assert payload["claim"] == "C7"
        assert payload["passed"] is True
        assert "C7: pass" in err

    def test_unknown_claim(self, capsys):
        code, _, err = run(capsys, "verify", "C99")
        assert code == 2
        assert "C99" in err

    def test_failure_exits_one(self, capsys, monkeypatch):
        from cursedgames.reports import ClaimReport

        def fake(claim, **kwargs):
            return ClaimReport(
                claim=claim, statement="forced", parameters={},
                expected=1, computed=2, passed=False, runtime=0.0,
            )

        monkeypatch.setattr(cli, "verify_claim", fake)
        code, out, err = run(capsys, "verify", "C7")
        assert code == 1
        assert "FAIL" in err

    def test_threads_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("CURSED_GAMES_THREADS", "2")
        code, out, _ = run(capsys, "verify", "C7", "ci_cse")
        assert code == 0
        chunks = out.strip().split("\n}\n{")
        assert len(chunks) == 2


class TestRegions:
    def test_writes_csv_and_png(self, tmp_path, capsys):
        code, out, _ = run(
            capsys, "regions", "C3", "--grid", "8",
            "--out-dir", str(tmp_path),
        )
        assert code == 0
        lines = out.splitlines()
        assert lines == [
            str(tmp_path / "c3-regions.csv"),
            str(tmp_path / "c3-regions.png"),
        ]
        assert (tmp_path / "c3-regions.csv").exists()
        assert (tmp_path / "c3-regions.png").stat().st_size > 0

    def test_custom_stem(self, tmp_path, capsys):
        code, out, _ = run(
            capsys, "regions", "C7", "--grid", "4",
            "--out-dir", str(tmp_path), "--stem", "sweep",
        )
        assert code == 0
        assert (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "sweep.png").exists()


class TestProfileText:
    def test_shorthand_round_trip(self):
        game = signaling_game()
        for text in ("[(A,B);(L,R)]", "[(B,B);(R,R)]"):
            sigma = parse_profile_shorthand(game, text)
            assert profile_shorthand(game, sigma) == text

    def test_shorthand_group_count_checked(self):
        game = signaling_game()
        with pytest.raises(cli.UsageError):
            parse_profile_shorthand(game, "[(A,B)]")

    def test_shorthand_item_count_checked(self):
        game = signaling_game()
        with pytest.raises(cli.UsageError):
            parse_profile_shorthand(game, "[(A,B,A);(L,R)]")

    def test_base_labels_resolve_on_scrambled(self):
        game = signaling_game(scrambled=True)
        sigma = parse_profile_shorthand(game, "[(A,A);(L,R)]")
        assert sigma.support(0, "t1", game.histories(0)[0])[0].startswith("A")

    def test_file_profile(self, tmp_path):
        game = signaling_game()
        data = {
            "sender|t1|": "A",
            "sender|t2|": "B",
            "receiver|-|(A)": "L",
            "receiver|-|(B)": "R",
        }
        path = tmp_path / "profile.json"
        path.write_text(json.dumps(data))
        sigma = load_profile(game, str(path), exact=True)
        assert profile_shorthand(game, sigma) == "[(A,B);(L,R)]"

    def test_malformed_json_rejected(self):
        game = signaling_game()
        with pytest.raises(cli.UsageError):
            load_profile(game, "{not json", exact=True)
