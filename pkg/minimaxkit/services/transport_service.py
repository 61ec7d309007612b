"""
Transport Service - Wasserstein distances between finitely supported measures.
"""
import itertools
import logging
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import InputError, SolverError
from minimaxkit.models.lp import LinearProgram, Relation
from minimaxkit.models.measure import DiscreteMeasure, TransportPlan
from minimaxkit.services.lp_service import LPService

logger = logging.getLogger(__name__)

Distance = Callable[[float, float], float]


def line_distance(x: float, y: float) -> float:
    return abs(x - y)


def _cdf_at(measure: DiscreteMeasure, points: List[Fraction]) -> List[Fraction]:
    pairs = sorted((Fraction(x), Fraction(w)) for x, w in zip(measure.support, measure.weights))
    values, mass, i = [], Fraction(0), 0
    for t in points:
        while i < len(pairs) and pairs[i][0] <= t:
            mass += pairs[i][1]
            i += 1
        values.append(mass)
    return values


class TransportService:
    """Service for optimal transport between discrete measures."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.lp_service = LPService(self.settings)

    def w1_1d(self, mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
        """
        ∫|F_μ(t) − F_ν(t)| dt over the merged breakpoints.

        The area is summed in exact rational arithmetic from the binary
        values of the inputs and rounded once at the end.
        """
        grid = sorted({Fraction(x) for x in mu.support} | {Fraction(x) for x in nu.support})
        f_mu, f_nu = _cdf_at(mu, grid), _cdf_at(nu, grid)
        area = sum(
            (abs(a - b) * (right - left) for a, b, left, right in zip(f_mu, f_nu, grid, grid[1:])),
            Fraction(0),
        )
        return float(area)

    def check_distance(
        self, points: List[float], distance: Distance, seed: Optional[int] = None
    ) -> List[str]:
        """
        Spot-check metric axioms of ``distance`` on ``points``.

        Symmetry, nonnegativity and d(x, x) = 0 are checked on every pair,
        the triangle inequality on up to 200 random triples.

        Returns:
            Descriptions of the violations found (empty if none)
        """
        problems: List[str] = []
        for x in points:
            if abs(distance(x, x)) > 1e-12:
                problems.append(f"d({x}, {x}) = {distance(x, x)} is not 0")
        for x, y in itertools.combinations(points, 2):
            dxy, dyx = distance(x, y), distance(y, x)
            if not (np.isfinite(dxy) and np.isfinite(dyx)):
                problems.append(f"d({x}, {y}) is not finite")
            elif dxy < 0:
                problems.append(f"d({x}, {y}) = {dxy} is negative")
            elif abs(dxy - dyx) > 1e-12 * max(1.0, abs(dxy)):
                problems.append(f"d({x}, {y}) = {dxy} but d({y}, {x}) = {dyx}")
        if len(points) >= 3 and not problems:
            rng = np.random.default_rng(self.settings.VERIFY_SEED if seed is None else seed)
            for _ in range(200):
                x, y, z = (points[i] for i in rng.choice(len(points), 3, replace=False))
                if distance(x, z) > distance(x, y) + distance(y, z) + 1e-12:
                    problems.append(f"triangle inequality fails for ({x}, {y}, {z})")
                    break
        return problems

    def transport_plan(
        self, mu: DiscreteMeasure, nu: DiscreteMeasure, distance: Distance = line_distance
    ) -> TransportPlan:
        """
        Optimal coupling of μ and ν for ground cost ``distance``.

        The flow LP has one variable per support pair; the last target
        marginal row is implied by the others and is dropped. The returned
        plan is checked against the LP certificate.

        Raises:
            SolverError: If the LP fails or its certificate does not check
        """
        m, n = mu.size, nu.size
        costs = np.array([[distance(x, y) for y in nu.support] for x in mu.support])
        rows, rhs = [], []
        for i in range(m):
            row = np.zeros((m, n))
            row[i, :] = 1.0
            rows.append(row.ravel())
            rhs.append(mu.weights[i])
        for j in range(n - 1):
            row = np.zeros((m, n))
            row[:, j] = 1.0
            rows.append(row.ravel())
            rhs.append(nu.weights[j])

        lp = LinearProgram(
            objective=costs.ravel().tolist(),
            constraint_matrix=np.array(rows).tolist(),
            relations=[Relation.EQ] * len(rows),
            rhs=rhs,
        )
        solution = self.lp_service.solve_lp(lp)
        if not solution.is_optimal:
            raise SolverError(f"Transport LP ended {solution.status.value}")
        certificate = self.lp_service.check_certificate(
            lp, solution, self.settings.CERTIFICATE_TOLERANCE
        )
        if not certificate.passed:
            raise SolverError("Transport LP certificate failed: " + "; ".join(certificate.failures))

        coupling = np.clip(np.asarray(solution.primal).reshape(m, n), 0.0, None)
        logger.debug(f"Transport plan {m}×{n}, cost {solution.objective_value:.12g}")
        return TransportPlan(
            cost=solution.objective_value,
            coupling=coupling.tolist(),
            source_potentials=solution.dual[:m],
            target_potentials=list(solution.dual[m:]) + [0.0],
            certified=certificate.passed,
        )

    def wk_discrete(
        self,
        mu: DiscreteMeasure,
        nu: DiscreteMeasure,
        distance: Distance = line_distance,
        k: float = 1.0,
    ) -> float:
        """
        sup of |∫f dμ − ∫f dν| over k-Lipschitz f, as k times the transport cost.

        Args:
            mu: Source measure
            nu: Target measure
            distance: Ground metric
            k: Lipschitz modulus (> 0)

        Raises:
            InputError: If k ≤ 0 or the distance fails its spot check on the
                joint support
        """
        if not (np.isfinite(k) and k > 0):
            raise InputError(f"Lipschitz modulus must be positive, got {k!r}")
        joint = sorted(set(mu.support) | set(nu.support))
        problems = self.check_distance(joint, distance)
        if problems:
            raise InputError("Distance is not a metric on the joint support: " + problems[0])
        return k * self.transport_plan(mu, nu, distance).cost
