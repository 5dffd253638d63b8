import click

from sfasat.core.middleware import command_middleware
from sfasat.services.parikh_service import ParikhService
from sfasat.services.sfa_service import SfaService
from sfasat.utils.sfa_file import parse_sfa_file


@click.command("parikh")
@click.argument("file", type=click.File("r", encoding="utf-8"))
@command_middleware
def parikh(file):
    """Print the Parikh formula of the propositionalized automaton in FILE."""
    sfa, _ = parse_sfa_file(file.read())
    table, letters = SfaService.propositionalize(sfa)
    formula = ParikhService.parikh_formula(table)

    for name, letter in zip(formula.letter_vars, letters):
        click.echo(f"# {name} counts {letter.render()}")
    click.echo(f"# nodes {formula.node_count} <= {ParikhService.size_bound(table)}")
    click.echo(ParikhService.render_formula(formula.formula))
