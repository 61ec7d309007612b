"""
Sample export script.

Writes example input files:
1. Problem files for the built-in games
2. Measure files for the wasserstein command
"""
import sys
from pathlib import Path
from typing import List

sys.path.append('.')

from minimaxkit.models.measure import DiscreteMeasure
from minimaxkit.services.benchmarks import (
    binary_test_game,
    clamp_game,
    matching_pennies,
    pick_smaller_game,
)
from minimaxkit.services.problem_io import save_measure, save_problem


def export_problems(directory: Path) -> List[Path]:
    """Write one problem file per built-in game."""
    print("Exporting problems...")
    problems = {
        "pick_smaller_4.json": pick_smaller_game(4),
        "clamp_5.json": clamp_game(5),
        "binary_test.json": binary_test_game(),
        "matching_pennies.json": matching_pennies(),
    }
    written = []
    for name, problem in problems.items():
        path = directory / name
        save_problem(problem, path)
        written.append(path)
        print(f"  ✓ {path} ({problem.n_theta}×{problem.n_actions}, {problem.n_obs} observations)")
    return written


def export_measures(directory: Path) -> List[Path]:
    """Write the measures used in the command-line examples."""
    print("\nExporting measures...")
    measures = {
        "dirac_0.json": DiscreteMeasure.dirac(0.0),
        "dirac_1.json": DiscreteMeasure.dirac(1.0),
        "half_0_1.json": DiscreteMeasure(support=[0.0, 1.0], weights=[0.5, 0.5]),
    }
    written = []
    for name, measure in measures.items():
        path = directory / name
        save_measure(measure, path)
        written.append(path)
        print(f"  ✓ {path}")
    return written


def main(target: str = "samples"):
    """Main export function."""
    print("=" * 60)
    print("SAMPLE EXPORT SCRIPT")
    print("=" * 60)

    try:
        directory = Path(target)
        directory.mkdir(parents=True, exist_ok=True)
        export_problems(directory)
        export_measures(directory)

        print("\n" + "=" * 60)
        print("✓ EXPORT COMPLETED SUCCESSFULLY")
        print("=" * 60)
        print("\nTry:")
        print(f"  python -m minimaxkit.main solve --input {directory}/binary_test.json")
        print(
            f"  python -m minimaxkit.main wasserstein --input {directory}/dirac_0.json "
            f"--input {directory}/dirac_1.json"
        )
    except Exception as e:
        print(f"\n❌ ERROR: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)


if __name__ == "__main__":
    main(*sys.argv[1:2])
