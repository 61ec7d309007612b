"""
Solve command - exact minimax solution of a finite problem.
"""
import logging
from typing import Optional

import click

from minimaxkit.commands.common import (
    build_config,
    emit,
    problem_options,
    report_options,
    resolve_problem,
)
from minimaxkit.models.labels import label_to_json
from minimaxkit.schemas import SolveReport
from minimaxkit.services.game_service import GameService

logger = logging.getLogger(__name__)


@click.command("solve")
@problem_options
@click.option("--tol", "tolerance", type=float, help="Certificate tolerance.")
@report_options
def command(
    input_path: Optional[str],
    game: Optional[str],
    size: int,
    tolerance: Optional[float],
    output: Optional[str],
    pretty: bool,
    deterministic: bool,
):
    """
    Solve a finite decision problem and certify the saddle point.

    Prints the value, the minimax procedure (one row per observation), the
    least favorable prior and whether the certificate passed.
    """
    config = build_config(
        command="solve",
        input=[input_path] if input_path else None,
        game=game,
        size=size,
        tolerance=tolerance,
        output=output,
        pretty=pretty,
        deterministic=deterministic,
    )
    problem = resolve_problem(config)
    service = GameService()
    solution = service.minimax_lp(problem)
    certificate = service.certify_saddle(problem, solution, config.tolerance)
    if not certificate.passed:
        logger.warning(f"Saddle certificate failed: {certificate.failures}")

    emit(
        SolveReport(
            value=solution.value,
            procedure=solution.minimax_procedure.matrix,
            prior=solution.least_favorable_prior.weights,
            gap=solution.duality_gap,
            certified=certificate.passed,
            theta=[label_to_json(t) for t in problem.theta_labels],
            actions=[label_to_json(a) for a in problem.action_labels],
            observations=[label_to_json(x) for x in problem.obs_labels],
            certificate_failures=certificate.failures,
        ),
        config,
    )
