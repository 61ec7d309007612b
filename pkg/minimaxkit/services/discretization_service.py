"""
Discretization Service - ε-nets of metric families, finite approximations of
their minimax value and least favorable prior sequences.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import EvaluationError, InputError
from minimaxkit.models.approximation import ApproximationResult, LipschitzReport
from minimaxkit.models.family import MetricFamily
from minimaxkit.models.labels import normalize_label
from minimaxkit.models.problem import FiniteDecisionProblem
from minimaxkit.models.procedure import RandomizedProcedure
from minimaxkit.services.game_service import GameService
from minimaxkit.services.risk_service import RiskService

logger = logging.getLogger(__name__)


def uniform_net(interval: Tuple[float, float], mesh: float) -> List[Fraction]:
    """
    Equally spaced points lo + i·(hi − lo)/n with n = ⌈(hi − lo)/ε⌉.

    Points are exact rationals, so a net whose mesh divides another's is an
    exact subset of it. Spacing is at most ε and every point of the interval
    lies within ε/2 of the net.

    Raises:
        InputError: If ε ≤ 0 or the interval is unbounded or empty
    """
    if not (isinstance(mesh, (int, float)) and math.isfinite(mesh) and mesh > 0):
        raise InputError(f"Mesh must be a positive number, got {mesh!r}")
    lo_raw, hi_raw = interval
    if not (math.isfinite(lo_raw) and math.isfinite(hi_raw)) or lo_raw > hi_raw:
        raise InputError(f"Interval must be bounded and nonempty, got [{lo_raw}, {hi_raw}]")
    lo, hi = normalize_label(float(lo_raw)), normalize_label(float(hi_raw))
    length = hi - lo
    if length == 0:
        return [lo]
    n = math.ceil(length / normalize_label(float(mesh)))
    return [lo + length * i / n for i in range(n + 1)]


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise EvaluationError(f"Oracle returned {value!r} at {what}")
    return value


class DiscretizationService:
    """Service for solving metric families on ε-nets."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.risk_service = RiskService(self.settings)
        self.game_service = GameService(self.settings)

    def _risk_at(self, family: MetricFamily, theta: float, actions: Sequence[float]) -> float:
        probs = family.kernel_row(theta)
        total = 0.0
        for p, action in zip(probs, actions):
            _finite(p, f"theta={theta!r} (kernel)")
            total += p * _finite(family.loss(theta, action), f"theta={theta!r}, action={action!r}")
        return total

    def rule_risk(
        self, family: MetricFamily, thetas: Sequence[float], actions: Sequence[float]
    ) -> List[float]:
        """
        Continuous risk of the non-randomized rule x ↦ actions[x].

        Raises:
            InputError: If there is not one action per observation
        """
        if len(actions) != len(family.obs_labels):
            raise InputError(
                f"Rule gives {len(actions)} actions for {len(family.obs_labels)} observations"
            )
        return [self._risk_at(family, float(t), [float(a) for a in actions]) for t in thetas]

    def spot_check_lipschitz(
        self, family: MetricFamily, samples: Optional[int] = None, seed: Optional[int] = None
    ) -> LipschitzReport:
        """
        Test the declared modulus on random pairs.

        Checks the risk of random non-randomized rules and the loss along θ,
        and the loss along a.

        Raises:
            EvaluationError: If the oracle returns a non-finite value
        """
        count = self.settings.LIPSCHITZ_SPOT_SAMPLES if samples is None else samples
        rng = np.random.default_rng(self.settings.VERIFY_SEED if seed is None else seed)
        k = family.lipschitz_k
        t_lo, t_hi = family.theta_interval
        a_lo, a_hi = family.action_interval
        n_obs = len(family.obs_labels)

        worst = 0.0
        violations: List[str] = []

        def record(kind: str, change: float, distance: float):
            nonlocal worst
            if distance > 0:
                worst = max(worst, change / distance)
            if change > k * distance + 1e-12 and len(violations) < 5:
                violations.append(f"{kind} changes by {change:.6g} over distance {distance:.6g}")

        for _ in range(count):
            t1, t2 = rng.uniform(t_lo, t_hi, 2)
            rule = rng.uniform(a_lo, a_hi, n_obs).tolist()
            record(
                "risk along theta",
                abs(self._risk_at(family, t1, rule) - self._risk_at(family, t2, rule)),
                abs(t1 - t2),
            )
            a1 = rule[0]
            record(
                "loss along theta",
                abs(
                    _finite(family.loss(t1, a1), f"theta={t1!r}, action={a1!r}")
                    - _finite(family.loss(t2, a1), f"theta={t2!r}, action={a1!r}")
                ),
                abs(t1 - t2),
            )
            b1, b2 = rng.uniform(a_lo, a_hi, 2)
            record(
                "loss along action",
                abs(
                    _finite(family.loss(t1, b1), f"theta={t1!r}, action={b1!r}")
                    - _finite(family.loss(t1, b2), f"theta={t1!r}, action={b2!r}")
                ),
                abs(b1 - b2),
            )

        return LipschitzReport(
            passed=not violations,
            lipschitz_k=k,
            samples=count,
            worst_ratio=worst,
            violations=violations,
        )

    def discretize(
        self, family: MetricFamily, mesh: float, action_mesh: Optional[float] = None
    ) -> FiniteDecisionProblem:
        """
        Replace Θ and A by their ε-nets and evaluate the oracle on the grid.

        Args:
            family: Metric family
            mesh: ε for the parameter net
            action_mesh: ε for the action net (defaults to ``mesh``)

        Returns:
            Finite decision problem on the nets

        Raises:
            InputError: If the mesh is invalid or the declared modulus fails
                the spot test
            EvaluationError: If the oracle returns a non-finite value
        """
        report = self.spot_check_lipschitz(family)
        if not report.passed:
            raise InputError(
                f"Declared Lipschitz constant {family.lipschitz_k} fails the spot test: "
                + "; ".join(report.violations)
            )
        thetas = uniform_net(family.theta_interval, mesh)
        actions = uniform_net(family.action_interval, mesh if action_mesh is None else action_mesh)

        loss = [
            [
                _finite(family.loss(float(t), float(a)), f"theta={t}, action={a}")
                for a in actions
            ]
            for t in thetas
        ]
        kernel = []
        for t in thetas:
            row = family.kernel_row(float(t))
            kernel.append([_finite(p, f"theta={t} (kernel)") for p in row])

        logger.debug(
            f"Discretized {family.family_id.value} at mesh {mesh}: "
            f"{len(thetas)} parameters, {len(actions)} actions"
        )
        return FiniteDecisionProblem(
            theta_labels=thetas,
            action_labels=actions,
            obs_labels=family.obs_labels,
            loss=loss,
            kernel=kernel,
        )

    def _solve(
        self, family: MetricFamily, mesh: float, action_mesh: Optional[float]
    ) -> Tuple[FiniteDecisionProblem, ApproximationResult]:
        problem = self.discretize(family, mesh, action_mesh)
        solution = self.game_service.minimax_lp(problem)
        _, maximin = self.risk_service.bayes_response(problem, solution.least_favorable_prior)
        k = family.lipschitz_k
        a_mesh = mesh if action_mesh is None else action_mesh
        result = ApproximationResult(
            mesh=mesh,
            action_mesh=a_mesh,
            lipschitz_k=k,
            discrete_value=solution.value,
            maximin_value=maximin,
            value_interval=(solution.value - k * a_mesh / 2, solution.value + k * mesh / 2),
            theta_points=problem.theta_labels,
            action_points=problem.action_labels,
            prior=solution.least_favorable_prior,
            procedure=solution.minimax_procedure,
        )
        return problem, result

    def approximate_minimax(
        self, family: MetricFamily, mesh: float, action_mesh: Optional[float] = None
    ) -> ApproximationResult:
        """
        Solve the discretized game and certify an interval for the true value.

        Restricting nature to its net lowers the value by at most k·ε/2, and
        restricting the statistician to the action net raises it by at most
        k·ε_A/2, so the interval [V_ε − k·ε_A/2, V_ε + k·ε/2] contains V.
        """
        _, result = self._solve(family, mesh, action_mesh)
        logger.info(
            f"{family.family_id.value} at mesh {mesh}: value {result.discrete_value:.12g}, "
            f"interval [{result.value_interval[0]:.12g}, {result.value_interval[1]:.12g}]"
        )
        return result

    def lf_prior_sequence(
        self, family: MetricFamily, schedule: Sequence[float]
    ) -> List[ApproximationResult]:
        """
        Approximate along a strictly decreasing mesh schedule.

        Entries are independent and may run on a thread pool of
        ``SCHEDULE_WORKERS``; results keep schedule order.

        Raises:
            InputError: If the schedule is empty, non-positive or not
                strictly decreasing
        """
        meshes = list(schedule)
        if not meshes:
            raise InputError("Mesh schedule must not be empty")
        if any(not (math.isfinite(e) and e > 0) for e in meshes):
            raise InputError("Mesh schedule entries must be positive")
        if any(b >= a for a, b in zip(meshes, meshes[1:])):
            raise InputError("Mesh schedule must be strictly decreasing")

        workers = max(1, self.settings.SCHEDULE_WORKERS)
        if workers == 1 or len(meshes) == 1:
            return [self.approximate_minimax(family, e) for e in meshes]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda e: self.approximate_minimax(family, e), meshes))

    def excess_bayes_risk(
        self,
        family: MetricFamily,
        delta: RandomizedProcedure,
        mesh: float,
        action_mesh: Optional[float] = None,
    ) -> float:
        """
        bayes_risk(π_ε, δ) − V_ε for a procedure on the action net.

        Raises:
            InputError: If ``delta`` is not defined on the net
        """
        problem, result = self._solve(family, mesh, action_mesh)
        if delta.n_obs != problem.n_obs or delta.n_actions != problem.n_actions:
            raise InputError(
                f"Procedure is {delta.n_obs}×{delta.n_actions} but the net has "
                f"{problem.n_obs} observations and {problem.n_actions} actions"
            )
        return self.risk_service.bayes_risk(problem, result.prior, delta) - result.discrete_value
