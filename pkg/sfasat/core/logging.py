import logging
import sys

from loguru import logger

from sfasat.core.config import settings

# log format
log_format = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{extra[name]}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)

logger.configure(extra={"name": "sfasat"})


# Bridge standard logging → loguru
class InterceptHandler(logging.Handler):
    def emit(self, record):
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        logger.opt(depth=6, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(level: str | None = None) -> None:
    """Install the stderr sink (stdout carries command output) and the optional file sink."""
    logger.remove()
    logger.add(
        sys.stderr,
        format=log_format,
        level=level or settings.LOG_LEVEL,
        backtrace=True,
        diagnose=False,
    )

    if settings.LOG_FILE:
        logger.add(
            settings.LOG_FILE,
            rotation="10 MB",
            retention="14 days",
            compression="zip",
            level="DEBUG",
        )

    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)


def get_logger(name: str = "sfasat"):
    return logger.bind(name=name)
