"""
Wasserstein command - k-Wasserstein distance between two measure files.
"""
from typing import Optional, Tuple

import click

from minimaxkit.commands.common import build_config, emit, report_options
from minimaxkit.schemas import WassersteinReport
from minimaxkit.services.problem_io import load_measure
from minimaxkit.services.transport_service import TransportService


@click.command("wasserstein")
@click.option(
    "--input",
    "input_paths",
    multiple=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Measure file; give it twice.",
)
@click.option("--k", type=float, default=1.0, show_default=True, help="Lipschitz modulus.")
@report_options
def command(
    input_paths: Tuple[str, ...],
    k: float,
    output: Optional[str],
    pretty: bool,
    deterministic: bool,
):
    """Distance between two discrete measures on the line, with the 1-D cross-check at k=1."""
    config = build_config(
        command="wasserstein",
        input=list(input_paths),
        k=k,
        output=output,
        pretty=pretty,
        deterministic=deterministic,
    )
    mu, nu = (load_measure(path) for path in config.input)
    service = TransportService()
    distance = service.wk_discrete(mu, nu, k=config.k)
    plan = service.transport_plan(mu, nu)

    line_oracle, agrees = None, None
    if config.k == 1.0:
        line_oracle = service.w1_1d(mu, nu)
        agrees = abs(line_oracle - distance) <= 1e-9
    emit(
        WassersteinReport(
            k=config.k,
            distance=distance,
            coupling=plan.coupling,
            line_oracle=line_oracle,
            oracle_agrees=agrees,
        ),
        config,
    )
