"""
Approximate command - ε-net schedule for a built-in metric family.
"""
from typing import Optional, Tuple

import click

from minimaxkit.commands.common import build_config, emit, parse_mesh, parse_params, report_options
from minimaxkit.models.labels import label_to_json
from minimaxkit.schemas import ApproximationEntry, ApproximationReport, PriorSummary
from minimaxkit.services.benchmarks import build_family
from minimaxkit.services.discretization_service import DiscretizationService


@click.command("approximate")
@click.option("--family", required=True, help="Built-in family: location, bernoulli or clamp.")
@click.option("--mesh", required=True, help="Comma-separated, strictly decreasing meshes.")
@click.option("--param", "params", multiple=True, help="Family parameter as key=value.")
@report_options
def command(
    family: str,
    mesh: str,
    params: Tuple[str, ...],
    output: Optional[str],
    pretty: bool,
    deterministic: bool,
):
    """
    Solve a family on a schedule of ε-nets.

    Each row gives the discrete value, the interval certified for the
    continuous value, the maximin value of the net prior and that prior.
    """
    config = build_config(
        command="approximate",
        family=family,
        parameters=parse_params(params),
        mesh=parse_mesh(mesh),
        output=output,
        pretty=pretty,
        deterministic=deterministic,
    )
    metric_family = build_family(config.family, **config.parameters)
    results = DiscretizationService().lf_prior_sequence(metric_family, config.mesh)

    entries = []
    for result in results:
        support = result.prior_support()
        entries.append(
            ApproximationEntry(
                mesh=result.mesh,
                value=result.discrete_value,
                interval=list(result.value_interval),
                maximin_value=result.maximin_value,
                net_size=len(result.theta_points),
                prior=PriorSummary(
                    support=[label_to_json(p) for p, _ in support],
                    weights=[w for _, w in support],
                ),
            )
        )
    emit(
        ApproximationReport(
            family=metric_family.family_id.value,
            parameters=config.parameters,
            lipschitz_k=metric_family.lipschitz_k,
            known_value=metric_family.known_value,
            results=entries,
        ),
        config,
    )
