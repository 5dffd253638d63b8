# sfasat/core/middleware.py
import functools
import time

import click

from sfasat.core.exceptions import BaseSolverException
from sfasat.core.logging import get_logger

logger = get_logger("middleware")


# Timing

def log_duration(command):
    """Log each command invocation with its duration."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        logger.info(f"➡️ {command.__name__}")
        try:
            return command(*args, **kwargs)
        finally:
            duration = (time.perf_counter() - start_time) * 1000
            logger.info(f"⬅️ {command.__name__} Duration: {duration:.2f}ms")

    return wrapper


# Error translation

def solver_errors(command):
    """
    Turn solver exceptions into `error: <detail>` on stderr and the
    exception's exit code. Anything else propagates.
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except BaseSolverException as e:
            logger.error(f"{e.error_code}: {e.detail}")
            click.echo(f"error: {e.detail}", err=True)
            raise SystemExit(e.exit_code) from e

    return wrapper


def command_middleware(command):
    """Apply every command wrapper, outermost first."""
    return solver_errors(log_duration(command))
