"""
Test the command-line interface: reports, options and exit codes.
"""
import json

import pytest
from click.testing import CliRunner

from minimaxkit.main import cli


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def run(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


def test_solve_sample_file(runner, samples_dir):
    """Test solving the binary test file."""
    result = run(runner, "solve", "--input", samples_dir / "binary_test.json", "--deterministic")

    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["value"] == pytest.approx(0.25)
    assert report["prior"] == pytest.approx([0.5, 0.5])
    assert report["certified"] is True
    assert report["theta"] == ["theta1", "theta2"]
    assert "timestamp" not in report


def test_solve_builtin_game_is_timestamped(runner):
    result = run(runner, "solve", "--game", "pick-smaller", "--size", 4)

    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["value"] == pytest.approx(0.0, abs=1e-12)
    assert report["timestamp"]
    assert report["theta"] == [1, "1/2", "1/3", "1/4"]


def test_deterministic_output_is_reproducible(runner, samples_dir):
    args = ["solve", "--input", samples_dir / "clamp_5.json", "--deterministic"]
    assert run(runner, *args).stdout == run(runner, *args).stdout


def test_output_file_and_pretty(runner, samples_dir, tmp_path):
    """Test --output writes the report and --pretty prints key: value lines."""
    target = tmp_path / "report.json"
    result = run(runner, "solve", "--game", "matching-pennies", "--output", target)

    assert result.exit_code == 0
    assert result.stdout == ""
    assert json.loads(target.read_text())["value"] == pytest.approx(0.0, abs=1e-12)

    pretty = run(runner, "solve", "--input", samples_dir / "binary_test.json", "--pretty")
    assert "value: 0.25" in pretty.stdout.splitlines()


@pytest.mark.parametrize(
    "args,detail",
    [
        (["solve"], "exactly one of --input or --game"),
        (["solve", "--game", "clamp", "--size", 0], "Size must be a positive integer"),
        (["fp", "--game", "binary-test", "--iters", 0], "at least 1"),
        (["approximate", "--family", "normal", "--mesh", "0.5"], "Unknown family"),
        (["approximate", "--family", "location", "--mesh", "0.25,0.5"], "strictly decreasing"),
        (["approximate", "--family", "location", "--mesh", "0.5", "--param", "lo"], "key=value"),
        (["approximate", "--family", "location", "--mesh", "x"], "comma-separated numbers"),
    ],
)
def test_input_errors_exit_2(runner, args, detail):
    """Test bad input is reported as JSON on stderr with exit code 2."""
    result = run(runner, *args)

    assert result.exit_code == 2
    error = json.loads(result.stderr.strip().splitlines()[-1])
    assert error["error"] == "Input Error"
    assert detail in error["detail"]


def test_invalid_problem_file_exit_2(runner, samples_dir):
    result = run(runner, "solve", "--input", samples_dir / "bad_kernel.json")

    assert result.exit_code == 2
    assert "kernel row 1 sums to" in json.loads(result.stderr.strip().splitlines()[-1])["detail"]


def test_internal_error_exit_3(runner, monkeypatch):
    def boom(self, problem):
        raise RuntimeError("pivot table corrupted")

    monkeypatch.setattr("minimaxkit.services.game_service.GameService.minimax_lp", boom)
    result = run(runner, "solve", "--game", "binary-test")

    assert result.exit_code == 3
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "Internal Error"


def test_fictitious_play_command(runner):
    result = run(runner, "fp", "--game", "binary-test", "--iters", 2000, "--deterministic")

    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["lower_bound"] <= 0.25 <= report["upper_bound"]
    assert report["iterations"] == 2000
    assert report["width"] == pytest.approx(report["upper_bound"] - report["lower_bound"])


def test_approximate_command(runner):
    """Test the location family schedule with custom bounds."""
    result = run(
        runner,
        "approximate",
        "--family", "location",
        "--mesh", "0.5,0.25",
        "--param", "lo=0",
        "--param", "hi=2",
        "--deterministic",
    )

    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["known_value"] == 1.0
    assert [r["mesh"] for r in report["results"]] == [0.5, 0.25]
    for entry in report["results"]:
        lo, hi = entry["interval"]
        assert lo <= 1.0 <= hi
    assert report["results"][0]["net_size"] == 5


def test_wasserstein_command(runner, samples_dir):
    """Test the distance between two Diracs and its line cross-check."""
    args = [
        "wasserstein",
        "--input", samples_dir / "dirac_0.json",
        "--input", samples_dir / "dirac_1.json",
        "--deterministic",
    ]
    report = json.loads(run(runner, *args).stdout)
    assert report["distance"] == pytest.approx(1.0)
    assert report["oracle_agrees"] is True

    scaled = json.loads(run(runner, *args, "--k", 2.0).stdout)
    assert scaled["distance"] == pytest.approx(2.0)
    assert scaled["line_oracle"] is None


def test_wasserstein_needs_two_inputs(runner, samples_dir):
    result = run(runner, "wasserstein", "--input", samples_dir / "dirac_0.json")
    assert result.exit_code == 2
    assert "needs --input twice" in result.stderr


def test_verify_filter(runner):
    result = run(runner, "verify", "--filter", "binary-test", "--deterministic")

    assert result.exit_code == 0, result.stdout
    report = json.loads(result.stdout)
    assert report["passed"] is True
    assert [c["name"] for c in report["checks"]] == ["binary-test"]


def test_verify_detects_injected_defect(runner):
    """Test a perturbed loss makes the truncation check fail with exit code 1."""
    result = run(
        runner,
        "verify",
        "--filter", "pick-smaller-truncations",
        "--inject-defect", "loss-perturbation",
        "--deterministic",
    )

    assert result.exit_code == 1
    report = json.loads(result.stdout)
    assert report["failed"] == 1
    assert "expected 0" in report["checks"][0]["detail"]


def test_verify_unknown_filter(runner):
    result = run(runner, "verify", "--filter", "nonsense")
    assert result.exit_code == 2
    assert "matches no check" in result.stderr


def test_version(runner):
    result = run(runner, "--version")
    assert result.exit_code == 0
    assert "1.0.0" in result.stdout
