import json
import math
import os
import subprocess
import sys

import pytest

from icsq import casebook
from icsq.cli import main

TSIRELSON_ANGLES = "0,1.5707963267948966,0.7853981633974483,2.356194490192345"


@pytest.fixture()
def case_dir(tmp_path):
    target = tmp_path / "cases"
    target.mkdir()
    for name in casebook.CASE_NAMES:
        (target / f"{name}.icsq").write_text(casebook.case_source(name))
    return target


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_case_file_with_demonstration_errors_exits_one(self, capsys, case_dir):
        code, out, _ = run_cli(capsys, ["check", str(case_dir / "stern_gerlach.icsq")])
        assert code == 1
        assert "E001" in out and "E002" in out

    def test_clean_scenario_exits_zero(self, capsys, tmp_path):
        path = tmp_path / "ok.icsq"
        path.write_text(
            "system p dim 2\nconfig z over p builtin spin_axis(0.0)\n"
            "statement s { yields(p, z) = up }\n"
        )
        code, out, _ = run_cli(capsys, ["check", str(path)])
        assert code == 0

    def test_json_format_follows_schema(self, capsys, case_dir):
        code, out, _ = run_cli(
            capsys, ["check", str(case_dir / "stern_gerlach.icsq"), "--format", "json"]
        )
        assert code == 1
        payload = json.loads(out)
        assert set(payload) == {"diagnostics"}
        first = payload["diagnostics"][0]
        assert list(first) == ["code", "severity", "message", "span", "statement"]

    def test_parse_failure_exits_two(self, capsys, tmp_path):
        path = tmp_path / "broken.icsq"
        path.write_text("system dim dim dim")
        code, _, err = run_cli(capsys, ["check", str(path)])
        assert code == 2
        assert "broken.icsq" in err

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run_cli(capsys, ["check", "/nonexistent/nope.icsq"])
        assert code == 2

    def test_dim_cap_exits_two(self, capsys, tmp_path):
        path = tmp_path / "huge.icsq"
        path.write_text("system whale dim 65\n")
        code, _, err = run_cli(capsys, ["check", str(path)])
        assert code == 2


class TestProb:
    def test_values_match_expected_table(self, capsys, case_dir):
        code, out, _ = run_cli(
            capsys,
            [
                "prob", str(case_dir / "stern_gerlach.icsq"),
                "--structure", "prep", "--config", "tilted", "--format", "json",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["probabilities"]["up"] == pytest.approx(0.75, abs=1e-9)

    def test_marginal_query_through_composite(self, capsys, case_dir):
        code, out, _ = run_cli(
            capsys,
            [
                "prob", str(case_dir / "wigner_friend.icsq"),
                "--structure", "sealed_lab", "--config", "friend_readout",
                "--format", "json",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["probabilities"]["saw_up"] == pytest.approx(0.5, abs=1e-9)

    def test_unknown_structure_exits_two(self, capsys, case_dir):
        code, _, err = run_cli(
            capsys,
            [
                "prob", str(case_dir / "stern_gerlach.icsq"),
                "--structure", "ghost", "--config", "tilted",
            ],
        )
        assert code == 2


class TestBell:
    def test_tsirelson_value_in_json(self, capsys):
        code, out, _ = run_cli(
            capsys, ["bell", "--angles", TSIRELSON_ANGLES, "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["S"]) == pytest.approx(2.8284271, abs=1e-6)
        assert payload["abs_S"] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
        assert payload["lhv_max"] == 2
        assert payload["joint_distribution_exists"] is False

    def test_degrees_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, ["bell", "--angles", "0,90,45,135", "--degrees", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["abs_S"] == pytest.approx(2 * math.sqrt(2), abs=1e-9)

    def test_malformed_angles_exit_two(self, capsys):
        code, _, err = run_cli(capsys, ["bell", "--angles", "1,2,3"])
        assert code == 2

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run_cli(capsys, ["bell", "--angles", TSIRELSON_ANGLES, "--format", "json"])
        _, second, _ = run_cli(capsys, ["bell", "--angles", TSIRELSON_ANGLES, "--format", "json"])
        assert first == second


class TestKs:
    def test_builtin_instance(self, capsys):
        code, out, _ = run_cli(capsys, ["ks", "--instance", "cabello-18", "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["colorable"] is False
        assert payload["rays"] == 18
        assert payload["witness"] is None

    def test_instance_from_file(self, capsys, tmp_path):
        path = tmp_path / "basis.ks"
        path.write_text("dim 3\nray 0 1 0 0\nray 1 0 1 0\nray 2 0 0 1\ncontext 0 1 2\n")
        code, out, _ = run_cli(capsys, ["ks", "--instance", str(path), "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["colorable"] is True
        assert sum(payload["witness"]) == 1

    def test_unknown_instance_exits_two(self, capsys):
        code, _, err = run_cli(capsys, ["ks", "--instance", "specker-0"])
        assert code == 2

    def test_invalid_instance_exits_two(self, capsys, tmp_path):
        path = tmp_path / "bad.ks"
        path.write_text("dim 3\nray 0 1 0 0\nray 1 1 0 0\nray 2 0 0 1\ncontext 0 1 2\n")
        code, _, err = run_cli(capsys, ["ks", "--instance", str(path)])
        assert code == 2
        assert "not orthogonal" in err


class TestRepeat:
    def test_repeatability_report(self, capsys, case_dir):
        code, out, _ = run_cli(
            capsys,
            [
                "repeat", str(case_dir / "stern_gerlach.icsq"),
                "--structure", "prep", "--config", "x_axis",
                "--n", "100000", "--seed", "0", "--tol", "0.01",
                "--format", "json",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["pass"] is True
        assert payload["max_abs_deviation"] < 0.01

    def test_seed_changes_counts_not_verdict(self, capsys, case_dir):
        args = [
            "repeat", str(case_dir / "stern_gerlach.icsq"),
            "--structure", "prep", "--config", "x_axis", "--format", "json",
        ]
        _, first, _ = run_cli(capsys, args + ["--seed", "1"])
        _, second, _ = run_cli(capsys, args + ["--seed", "2"])
        assert json.loads(first)["pass"] and json.loads(second)["pass"]
        assert first != second


class TestExamples:
    def test_lists_all_cases(self, capsys):
        code, out, _ = run_cli(capsys, ["examples"])
        assert code == 0
        for name in casebook.CASE_NAMES:
            assert name in out

    def test_write_emits_all_case_files(self, capsys, tmp_path):
        target = tmp_path / "out"
        code, out, _ = run_cli(capsys, ["examples", "--write", str(target)])
        assert code == 0
        names = sorted(p.name for p in target.iterdir())
        assert names == sorted(f"{n}.icsq" for n in casebook.CASE_NAMES)


class TestFlagContract:
    def test_help_exits_zero_and_lists_subcommands(self, capsys):
        code, out, _ = run_cli(capsys, ["--help"])
        assert code == 0
        for word in ("check", "prob", "bell", "ks", "repeat", "examples"):
            assert word in out

    def test_subcommand_help_lists_flags(self, capsys):
        code, out, _ = run_cli(capsys, ["repeat", "--help"])
        assert code == 0
        for flag in ("--structure", "--config", "--n", "--seed", "--tol", "--format"):
            assert flag in out

    def test_unknown_subcommand_exits_three(self, capsys):
        code, _, err = run_cli(capsys, ["transmogrify"])
        assert code == 3

    def test_bad_flag_exits_three(self, capsys):
        code, _, err = run_cli(capsys, ["bell", "--angles", "1,2,3,4", "--format", "xml"])
        assert code == 3

    def test_missing_required_flag_exits_three(self, capsys):
        code, _, err = run_cli(capsys, ["bell"])
        assert code == 3


class TestConsoleEntryPoint:
    def test_module_invocation(self):
        result = subprocess.run(
            [sys.executable, "-m", "icsq.cli", "examples"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert "stern_gerlach" in result.stdout

    def test_color_togglable_via_env(self, capsys, case_dir, monkeypatch):
        monkeypatch.setenv("ICSQ_COLOR", "1")
        _, colored, _ = run_cli(capsys, ["check", str(case_dir / "stern_gerlach.icsq")])
        assert "\x1b[" in colored
        monkeypatch.setenv("ICSQ_COLOR", "0")
        _, plain, _ = run_cli(capsys, ["check", str(case_dir / "stern_gerlach.icsq")])
        assert "\x1b[" not in plain
