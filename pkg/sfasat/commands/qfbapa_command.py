import json

import click

from sfasat.core.middleware import command_middleware
from sfasat.models.bapa import set_variables
from sfasat.schemas.result import SatStatus
from sfasat.schemas.bapa import BapaReport
from sfasat.services.qfbapa_service import QfbapaService
from sfasat.utils.bapa_parser import BapaParser


def _members(values) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


@click.command("qfbapa")
@click.argument("expr")
@click.option("--certificate", "show_certificate", is_flag=True, help="Also print a sparse certificate.")
@click.option("--json", "as_json", is_flag=True, help="Append a machine-readable record.")
@command_middleware
def qfbapa(expr: str, show_certificate: bool, as_json: bool):
    """
    Solve a standalone QFBAPA formula.

    Set variables start with an uppercase letter; |B| is cardinality, U the
    universe, ~ complement, & intersection, + union.
    """
    formula = BapaParser.parse(expr)
    set_vars = set_variables(formula)
    model = QfbapaService.qfbapa_solve(formula, set_vars)
    p, a = QfbapaService.solve_profile(formula)
    status = SatStatus.SAT if model is not None else SatStatus.UNSAT

    click.echo(status.value)
    certificate = None
    if model is not None:
        click.echo(f"universe={model.universe}")
        for name in model.set_vars:
            click.echo(f"{name}={_members(model.sets[name])}")
        for name in sorted(model.integers):
            click.echo(f"{name}={model.integers[name]}")
        if show_certificate or as_json:
            certificate = QfbapaService.qfbapa_certificate(formula, set_vars)
        if show_certificate:
            click.echo(f"certificate={_members(certificate.regions)}")
    if as_json:
        report = BapaReport(
            status=status,
            model=model,
            certificate=certificate,
            sparsity_bound=QfbapaService.sparsity_bound(p, a),
        )
        click.echo(json.dumps(report.model_dump(mode="json"), sort_keys=True))

    raise SystemExit(0 if model is not None else 1)
