import logging

from rich.console import Console
from rich.logging import RichHandler


LOGGER_NAME = "wn_align"


def setup_logging(debug: bool = False) -> logging.Logger:
    """
    Route the package logs to stderr through Rich.

    Args:
        debug: Log at DEBUG level instead of WARNING.

    Returns:
        The package logger.
    """
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = RichHandler(
        console=Console(stderr=True), show_path=False, rich_tracebacks=debug, markup=False
    )
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if debug else logging.WARNING)
    logger.propagate = False
    return logger
