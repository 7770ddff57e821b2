"""Logging configuration shared by the library and the command line.

Every record carries the run id and the command of the invocation that produced it. Seeded
runs get a reproducible id so that two runs with the same seed log identically.
"""

import logging
import sys
import uuid

from .settings import get_settings


def new_run_id(command: str = "-", seed: int | None = None) -> str:
    """Name a run: ``<command>-<seed>`` for seeded commands, a random hex id otherwise."""
    if seed is not None:
        return f"{command}-{seed}"
    return uuid.uuid4().hex[:16]


class RunIDFilter(logging.Filter):
    """Stamp records with the run id and the command of one invocation."""

    def __init__(self, command: str = "-", seed: int | None = None):
        super().__init__()
        self.command = command
        self.run_id = new_run_id(command, seed)

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = self.run_id
        record.command = self.command
        return True


def setup_logging(command: str = "-", seed: int | None = None) -> str:
    """Route library logs to stderr, stamped for this invocation.

    Args:
        command: Subcommand being run.
        seed: Seed of a reproducible run, if any.

    Returns:
        The run id attached to every record.
    """
    settings = get_settings()
    run_filter = RunIDFilter(command, seed)

    if settings.is_production:
        log_format = (
            '{"timestamp": "%(asctime)s", "run_id": "%(run_id)s", "command": "%(command)s", '
            '"logger": "%(name)s", "level": "%(levelname)s", "message": "%(message)s"}'
        )
    else:
        log_format = "[%(asctime)s] [%(run_id)s] [%(name)s] [%(levelname)s] %(message)s"

    # stdout carries the result document
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(log_format, datefmt="%Y-%m-%d %H:%M:%S"))
    handler.addFilter(run_filter)

    root_logger = logging.getLogger()
    root_logger.setLevel(settings.log_level)
    for existing in root_logger.handlers[:]:
        root_logger.removeHandler(existing)
    root_logger.addHandler(handler)

    logging.getLogger("sympy").setLevel(logging.WARNING)
    return run_filter.run_id


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the given name.

    Args:
        name: Logger name (typically __name__ of the module).

    Returns:
        Configured logger instance.
    """
    return logging.getLogger(name)
