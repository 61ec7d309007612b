"""
Fictitious play command - iterative bracket on the game value.
"""
from typing import Optional

import click

from minimaxkit.commands.common import (
    build_config,
    emit,
    problem_options,
    report_options,
    resolve_problem,
)
from minimaxkit.schemas import FictitiousPlayReport
from minimaxkit.services.game_service import GameService


@click.command("fp")
@problem_options
@click.option("--iters", "iterations", type=int, help="Number of rounds (default from settings).")
@report_options
def command(
    input_path: Optional[str],
    game: Optional[str],
    size: int,
    iterations: Optional[int],
    output: Optional[str],
    pretty: bool,
    deterministic: bool,
):
    """Bracket the value of a finite problem by fictitious play."""
    config = build_config(
        command="fp",
        input=[input_path] if input_path else None,
        game=game,
        size=size,
        iterations=iterations,
        output=output,
        pretty=pretty,
        deterministic=deterministic,
    )
    problem = resolve_problem(config)
    result = GameService().fictitious_play(problem, config.iterations)
    emit(
        FictitiousPlayReport(
            iterations=result.iterations,
            lower_bound=result.lower_bound,
            upper_bound=result.upper_bound,
            width=result.width,
            prior=result.empirical_prior.weights,
            procedure=result.empirical_procedure.matrix,
        ),
        config,
    )
