"""
Test reading and writing problem and measure files.
"""
import json
from fractions import Fraction

import pytest

from minimaxkit.exceptions import InputError
from minimaxkit.models.measure import DiscreteMeasure
from minimaxkit.services.benchmarks import binary_test_game, pick_smaller_game
from minimaxkit.services.problem_io import (
    load_measure,
    load_problem,
    problem_from_document,
    save_measure,
    save_problem,
)


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def test_load_sample_problem(samples_dir):
    """Test the bundled binary test file matches the builder."""
    problem = load_problem(samples_dir / "binary_test.json")
    expected = binary_test_game()

    assert problem.theta_labels == expected.theta_labels
    assert problem.kernel == expected.kernel
    assert problem.loss == expected.loss


def test_kernel_may_be_omitted_without_data(samples_dir):
    problem = load_problem(samples_dir / "clamp_5.json")
    assert problem.kernel == [[1.0]] * 5
    assert problem.theta_labels == [Fraction(i) for i in range(1, 6)]


def test_bad_kernel_sample_is_rejected(samples_dir):
    with pytest.raises(InputError, match="kernel row 1 sums to"):
        load_problem(samples_dir / "bad_kernel.json")


def test_saved_problem_keeps_rational_labels(tmp_path):
    """Test labels like 1/3 survive a save and load exactly."""
    path = tmp_path / "pick.json"
    save_problem(pick_smaller_game(3), path)

    assert json.loads(path.read_text())["theta"] == [1, "1/2", "1/3"]
    assert load_problem(path).theta_labels == [Fraction(1), Fraction(1, 2), Fraction(1, 3)]


def test_malformed_json_names_position(tmp_path):
    path = write(tmp_path, "broken.json", '{"theta": [1, 2,\n  "loss": }')
    with pytest.raises(InputError, match=r"broken.json: line 2, column"):
        load_problem(path)


def test_missing_file():
    with pytest.raises(InputError, match="Cannot read"):
        load_problem("/nonexistent/problem.json")


@pytest.mark.parametrize(
    "document,message",
    [
        (
            {"theta": [0], "actions": [0], "observations": [0]},
            "loss: Field required",
        ),
        (
            {"theta": [0], "actions": [0], "observations": [0, 1], "loss": [[0.0]]},
            "kernel may be omitted only with a single observation",
        ),
        (
            {"theta": [0], "actions": [0, 1], "observations": [0], "loss": [[0.0, "x"]]},
            r"loss\[0\]\[1\] is not a finite number",
        ),
        (
            {"theta": [0, 1], "actions": [0], "observations": [0], "loss": [[0.0]]},
            "loss must have 2 rows, found 1",
        ),
        (
            {"theta": [0, "0/1"], "actions": [0], "observations": [0], "loss": [[0.0], [1.0]]},
            "duplicate label 0",
        ),
        (["not", "a", "problem"], "document"),
    ],
)
def test_document_errors(document, message):
    """Test each malformed document is reported with its location."""
    with pytest.raises(InputError, match=message):
        problem_from_document(document)


def test_measure_files(tmp_path, samples_dir):
    """Test measure documents load, save and validate."""
    assert load_measure(samples_dir / "half_0_1.json").weights == [0.5, 0.5]

    path = tmp_path / "m.json"
    save_measure(DiscreteMeasure(support=[-1.0, 2.5], weights=[0.25, 0.75]), path)
    assert load_measure(path).support == [-1.0, 2.5]

    bad = write(tmp_path, "bad.json", {"support": [0.0, 1.0], "weights": [0.5, 0.25]})
    with pytest.raises(InputError, match="bad.json: .*sum"):
        load_measure(bad)
