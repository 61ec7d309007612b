"""
Random instance generators for property checks.

Every generator takes a ``numpy.random.Generator`` so callers control
reproducibility.
"""
from fractions import Fraction
from typing import Tuple

import numpy as np

from minimaxkit.models.lp import LinearProgram, Relation
from minimaxkit.models.measure import DiscreteMeasure
from minimaxkit.models.problem import FiniteDecisionProblem
from minimaxkit.models.procedure import FinitePrior, LabeledDistribution, RandomizedProcedure
from minimaxkit.models.witness import CountableGame


def _weights(rng: np.random.Generator, size: int) -> np.ndarray:
    w = rng.dirichlet(np.ones(size))
    return w / w.sum()


def random_problem(
    rng: np.random.Generator,
    max_dim: int = 6,
    loss_range: Tuple[float, float] = (-1.0, 1.0),
) -> FiniteDecisionProblem:
    """Problem with |Θ|, |A|, |X| drawn from 1..max_dim and Dirichlet kernel rows."""
    n_theta, n_actions, n_obs = (int(v) for v in rng.integers(1, max_dim + 1, size=3))
    return FiniteDecisionProblem(
        theta_labels=list(range(n_theta)),
        action_labels=list(range(n_actions)),
        obs_labels=list(range(n_obs)),
        loss=rng.uniform(*loss_range, size=(n_theta, n_actions)).tolist(),
        kernel=[_weights(rng, n_obs).tolist() for _ in range(n_theta)],
    )


def random_procedure(
    rng: np.random.Generator, problem: FiniteDecisionProblem
) -> RandomizedProcedure:
    return RandomizedProcedure(
        matrix=[_weights(rng, problem.n_actions).tolist() for _ in range(problem.n_obs)]
    )


def random_prior(rng: np.random.Generator, size: int) -> FinitePrior:
    return FinitePrior(weights=_weights(rng, size).tolist())


def random_lp(rng: np.random.Generator, max_vars: int = 5, max_rows: int = 5) -> LinearProgram:
    """
    Bounded LP with integer data: box 0 ≤ x ≤ 10, rows built around a feasible
    integer point so the program is never infeasible.
    """
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(0, max_rows + 1))
    matrix = rng.integers(-5, 6, size=(m, n))
    x0 = rng.integers(0, 11, size=n)
    activity = matrix @ x0
    relations, rhs = [], []
    for value in activity:
        relation = [Relation.LE, Relation.GE, Relation.EQ][int(rng.integers(0, 3))]
        slack = int(rng.integers(0, 4))
        relations.append(relation)
        if relation == Relation.LE:
            rhs.append(float(value + slack))
        elif relation == Relation.GE:
            rhs.append(float(value - slack))
        else:
            rhs.append(float(value))
    return LinearProgram(
        objective=rng.integers(-5, 6, size=n).astype(float).tolist(),
        constraint_matrix=matrix.astype(float).tolist(),
        relations=relations,
        rhs=rhs,
        lower_bounds=[0.0] * n,
        upper_bounds=[10.0] * n,
    )


def random_measure(
    rng: np.random.Generator, max_size: int = 6, lo: float = -5.0, hi: float = 5.0
) -> DiscreteMeasure:
    size = int(rng.integers(1, max_size + 1))
    support = np.unique(rng.uniform(lo, hi, size=size))
    return DiscreteMeasure(support=support.tolist(), weights=_weights(rng, support.size).tolist())


def random_game_distribution(
    rng: np.random.Generator, game: CountableGame, max_points: int = 6
) -> LabeledDistribution:
    """Finitely supported weights on points of the countable game (1/n or n)."""
    size = int(rng.integers(1, max_points + 1))
    if game == CountableGame.PICK_SMALLER:
        denominators = rng.choice(np.arange(1, 1001), size=size, replace=False)
        labels = [Fraction(1, int(d)) for d in denominators]
    else:
        values = rng.choice(np.arange(1, 51), size=size, replace=False)
        labels = [Fraction(int(v)) for v in values]
    return LabeledDistribution(labels=labels, weights=_weights(rng, size).tolist())
