import click

from sfasat.commands.check_command import check
from sfasat.commands.parikh_command import parikh
from sfasat.commands.qfbapa_command import qfbapa
from sfasat.commands.selftest_command import selftest
from sfasat.core.logging import setup_logging


@click.group()
@click.option("--log-level", default=None, help="Override SFASAT_LOG_LEVEL for this run.")
def cli(log_level):
    """Satisfiability of symbolic finite automata with cardinality constraints."""
    setup_logging(log_level.upper() if log_level else None)


cli.add_command(check)
cli.add_command(parikh)
cli.add_command(qfbapa)
cli.add_command(selftest)
