"""
Benchmark builders - decision problems and families with known answers.
"""
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from minimaxkit.exceptions import InputError
from minimaxkit.models.family import BernoulliFamily, ClampFamily, LocationFamily, MetricFamily
from minimaxkit.models.labels import Label
from minimaxkit.models.problem import FiniteDecisionProblem


def pick_smaller_loss(theta: Fraction, action: Fraction) -> int:
    """0 on a tie, 1 if the parameter is smaller than the action, −1 otherwise."""
    if theta == action:
        return 0
    return 1 if theta < action else -1


def clamp_loss(theta: Fraction, action: Fraction) -> float:
    return float(min(Fraction(1), max(Fraction(-1), theta - action)))


def game_on(
    thetas: Sequence[Label],
    actions: Sequence[Label],
    loss: Callable[[Label, Label], float],
) -> FiniteDecisionProblem:
    """No-data problem on the given points with ℓ evaluated pointwise."""
    return FiniteDecisionProblem(
        theta_labels=list(thetas),
        action_labels=list(actions),
        obs_labels=[0],
        loss=[[float(loss(t, a)) for a in actions] for t in thetas],
        kernel=[[1.0] for _ in thetas],
    )


def _check_size(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"Size must be a positive integer, got {n!r}")
    return n


def pick_smaller_game(n: int) -> FiniteDecisionProblem:
    """Θ = A = {1, 1/2, …, 1/n}; whoever names the smaller number wins one unit."""
    points = [Fraction(1, i) for i in range(1, _check_size(n) + 1)]
    return game_on(points, points, pick_smaller_loss)


def clamp_game(n: int) -> FiniteDecisionProblem:
    """Θ = A = {1, …, n}, ℓ(θ, a) = clamp(θ − a, −1, 1)."""
    points = [Fraction(i) for i in range(1, _check_size(n) + 1)]
    return game_on(points, points, clamp_loss)


def binary_test_game() -> FiniteDecisionProblem:
    """
    Two-point test with one binary observation and 0-1 loss.

    P_θ1(1) = 3/4 and P_θ2(1) = 1/4; reporting θ1 iff x = 1 has risk 1/4 at
    both parameters, and the uniform prior is least favorable.
    """
    return FiniteDecisionProblem(
        theta_labels=["theta1", "theta2"],
        action_labels=["a1", "a2"],
        obs_labels=[0, 1],
        loss=[[0.0, 1.0], [1.0, 0.0]],
        kernel=[[0.25, 0.75], [0.75, 0.25]],
    )


def matching_pennies() -> FiniteDecisionProblem:
    """The statistician loses a unit on a mismatch and gains one on a match; value 0."""
    sides = ["heads", "tails"]
    return FiniteDecisionProblem(
        theta_labels=sides,
        action_labels=sides,
        obs_labels=[0],
        loss=[[-1.0, 1.0], [1.0, -1.0]],
        kernel=[[1.0], [1.0]],
    )


def location_family(lo: float = 0.0, hi: float = 1.0) -> LocationFamily:
    """Θ = A = [lo, hi] with absolute-error loss; the value is (hi − lo)/2."""
    return LocationFamily(
        theta_interval=(lo, hi), action_interval=(lo, hi), known_value=(hi - lo) / 2
    )


def bernoulli_family() -> BernoulliFamily:
    return BernoulliFamily()


def clamp_family(length: float = 4.0) -> ClampFamily:
    if not length > 0:
        raise InputError(f"Clamp family length must be positive, got {length!r}")
    return ClampFamily(theta_interval=(0.0, length), action_interval=(0.0, length))


GAME_BUILDERS: Dict[str, Callable[[int], FiniteDecisionProblem]] = {
    "pick-smaller": pick_smaller_game,
    "clamp": clamp_game,
    "binary-test": lambda n: binary_test_game(),
    "matching-pennies": lambda n: matching_pennies(),
}

FAMILY_BUILDERS: Dict[str, Callable[..., MetricFamily]] = {
    "location": location_family,
    "bernoulli": bernoulli_family,
    "clamp": clamp_family,
}


def build_game(name: str, size: int = 1) -> FiniteDecisionProblem:
    if name not in GAME_BUILDERS:
        raise InputError(f"Unknown game {name!r}; choose from {sorted(GAME_BUILDERS)}")
    return GAME_BUILDERS[name](size)


def build_family(name: str, **parameters: float) -> MetricFamily:
    if name not in FAMILY_BUILDERS:
        raise InputError(f"Unknown family {name!r}; choose from {sorted(FAMILY_BUILDERS)}")
    try:
        return FAMILY_BUILDERS[name](**parameters)
    except TypeError as e:
        raise InputError(f"Bad parameters for family {name!r}: {e}") from None


def family_names() -> List[str]:
    return sorted(FAMILY_BUILDERS)
