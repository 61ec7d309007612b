"""
Witness Service - Strategies showing that the countable pick-smaller and
clamp games have upper value 1 and countably additive lower value −1.
"""
import logging
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import InputError
from minimaxkit.models.labels import Label, label_to_json
from minimaxkit.models.procedure import FinitePrior, LabeledDistribution, RandomizedProcedure
from minimaxkit.models.witness import (
    CountableGame,
    EscapingPriorEntry,
    EscapingPriorReport,
    WitnessReport,
)
from minimaxkit.services.benchmarks import clamp_loss, game_on, pick_smaller_loss
from minimaxkit.services.risk_service import RiskService

logger = logging.getLogger(__name__)


def _loss_of(game: CountableGame) -> Callable[[Label, Label], float]:
    return pick_smaller_loss if game == CountableGame.PICK_SMALLER else clamp_loss


def _check_epsilon(epsilon: float):
    if not 0 < epsilon < 0.5:
        raise InputError(f"Epsilon must lie in (0, 1/2), got {epsilon!r}")


def _check_points(game: CountableGame, points: Sequence[Label]):
    for p in points:
        if game == CountableGame.PICK_SMALLER:
            ok = isinstance(p, Fraction) and p.numerator == 1 and p.denominator >= 1
            expected = "of the form 1/n"
        else:
            ok = isinstance(p, Fraction) and p.denominator == 1 and p >= 1
            expected = "a positive integer"
        if not ok:
            raise InputError(f"Point {label_to_json(p)!r} is not {expected}")


def heavy_set(dist: LabeledDistribution, epsilon: float) -> List[Label]:
    """
    Smallest set of points carrying mass > 1 − ε.

    Points are taken by decreasing mass, larger points first among equal
    masses, so the choice is deterministic.
    """
    ranked = sorted(
        ((w, p) for p, w in zip(dist.labels, dist.weights) if w > 0),
        key=lambda item: (-item[0], -item[1]),
    )
    chosen: List[Label] = []
    mass = 0.0
    for w, p in ranked:
        chosen.append(p)
        mass += w
        if mass > 1 - epsilon:
            break
    return chosen


def escape_point(game: CountableGame, chosen: Sequence[Label]) -> Fraction:
    """A point beyond every chosen point: 1/(m+1) below min 1/m, or max + 2 above."""
    if game == CountableGame.PICK_SMALLER:
        return Fraction(1, max(p.denominator for p in chosen) + 1)
    return max(chosen) + 2


class WitnessService:
    """Service for constructing and checking minimax-failure witnesses."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.risk_service = RiskService(self.settings)

    def nature_witness(
        self,
        delta: LabeledDistribution,
        epsilon: float,
        game: CountableGame = CountableGame.PICK_SMALLER,
    ) -> WitnessReport:
        """
        A parameter θ₀ beyond the heavy part of δ with r(θ₀, δ) > 1 − 2ε.

        Args:
            delta: Procedure over a finite set of actions (no data)
            epsilon: ε in (0, 1/2)
            game: Which countable game δ plays

        Returns:
            Witness report with the risk recomputed on the truncated game

        Raises:
            InputError: If ε is out of range or an action is not a game point
        """
        _check_epsilon(epsilon)
        _check_points(game, delta.support())
        chosen = heavy_set(delta, epsilon)
        theta0 = escape_point(game, chosen)

        actions = delta.support()
        problem = game_on([theta0], actions, _loss_of(game))
        procedure = RandomizedProcedure(matrix=[delta.aligned_weights(actions).tolist()])
        achieved = self.risk_service.risk(problem, 0, procedure)
        bound = 1 - 2 * epsilon
        logger.info(
            f"Nature witness on {game.value}: theta0={label_to_json(theta0)}, "
            f"risk {achieved:.12g} vs bound {bound:.12g}"
        )
        return WitnessReport(
            game=game,
            side="nature",
            epsilon=epsilon,
            witness_point=theta0,
            chosen_set=chosen,
            achieved_value=achieved,
            bound=bound,
            holds=achieved > bound,
        )

    def statistician_witness(
        self,
        prior: LabeledDistribution,
        epsilon: float,
        game: CountableGame = CountableGame.PICK_SMALLER,
    ) -> WitnessReport:
        """
        A non-randomized δ₀ beyond the heavy part of π with r(π, δ₀) < 2ε − 1.

        Raises:
            InputError: If ε is out of range or a parameter is not a game point
        """
        _check_epsilon(epsilon)
        _check_points(game, prior.support())
        chosen = heavy_set(prior, epsilon)
        action0 = escape_point(game, chosen)

        thetas = prior.support()
        problem = game_on(thetas, [action0], _loss_of(game))
        finite_prior = FinitePrior(weights=prior.aligned_weights(thetas).tolist())
        achieved = self.risk_service.bayes_risk(
            problem, finite_prior, RandomizedProcedure.point_mass(1, 1, 0)
        )
        bound = 2 * epsilon - 1
        logger.info(
            f"Statistician witness on {game.value}: action={label_to_json(action0)}, "
            f"Bayes risk {achieved:.12g} vs bound {bound:.12g}"
        )
        return WitnessReport(
            game=game,
            side="statistician",
            epsilon=epsilon,
            witness_point=action0,
            witness_procedure=LabeledDistribution(labels=[action0], weights=[1.0]),
            chosen_set=chosen,
            achieved_value=achieved,
            bound=bound,
            holds=achieved < bound,
        )

    def escaping_prior_report(
        self,
        k_list: Sequence[int],
        procedures: Sequence[LabeledDistribution],
        game: CountableGame = CountableGame.CLAMP,
    ) -> EscapingPriorReport:
        """
        Bayes risk of each procedure against point-mass priors escaping to infinity.

        For the clamp game the prior sits at K and the risk is exactly 1 once
        K > B, B the largest action used (K ≥ B + 1 puts every action at
        least one unit below K). For the pick-smaller game it
        sits at 1/K and the risk is exactly 1 once 1/K is below every
        action used. Pairs outside that range are flagged, not rejected.

        Raises:
            InputError: On an empty K list or procedure list, or a K < 1
        """
        if not k_list:
            raise InputError("K list must not be empty")
        if not procedures:
            raise InputError("Procedure list must not be empty")
        loss = _loss_of(game)
        for d in procedures:
            _check_points(game, d.support())

        entries = []
        for k in k_list:
            if isinstance(k, bool) or not isinstance(k, int) or k < 1:
                raise InputError(f"K must be a positive integer, got {k!r}")
            point = Fraction(1, k) if game == CountableGame.PICK_SMALLER else Fraction(k)
            risks, flagged = [], []
            for i, d in enumerate(procedures):
                actions = d.support()
                problem = game_on([point], actions, loss)
                procedure = RandomizedProcedure(matrix=[d.aligned_weights(actions).tolist()])
                risks.append(self.risk_service.risk(problem, 0, procedure))
                if game == CountableGame.CLAMP:
                    escaped = point > max(actions)
                else:
                    escaped = point < min(actions)
                if not escaped:
                    flagged.append(i)
            entries.append(
                EscapingPriorEntry(
                    k=k,
                    prior_point=str(label_to_json(point)),
                    bayes_risks=risks,
                    infimum=min(risks),
                    flagged=flagged,
                )
            )
        return EscapingPriorReport(game=game, entries=entries)
