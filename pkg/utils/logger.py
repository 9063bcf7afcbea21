"""
Logging for permucell.

setup_logger(__name__) gives every module a named logger with two sinks:
a rich console handler on stderr (stdout carries the emitted tables) and a
daily plain-text file. File lines carry the process id, since rank jobs and
suite checks run in worker processes.
"""
import logging
import os
from datetime import datetime
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from config.settings import LOG_DIR, LOG_LEVEL

FILE_FORMAT = "%(asctime)s.%(msecs)03d pid=%(process)d %(levelname)-7s [%(short)s] %(message)s"
CONSOLE_FORMAT = "[%(short)s] %(message)s"


class ShortNameFormatter(logging.Formatter):
    """Adds `short`: the last dotted component of the logger name (complexes.chain → chain)."""

    def format(self, record: logging.LogRecord) -> str:
        record.short = record.name.rsplit(".", 1)[-1]
        return super().format(record)


def setup_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    os.makedirs(LOG_DIR, exist_ok=True)

    logger = logging.getLogger(name)
    logger.setLevel(level if level is not None else getattr(logging, LOG_LEVEL, logging.INFO))

    if logger.handlers:
        return logger

    console = RichHandler(console=Console(stderr=True), show_path=False, log_time_format="%H:%M:%S")
    console.setFormatter(ShortNameFormatter(CONSOLE_FORMAT))
    logger.addHandler(console)

    today = datetime.now().strftime("%Y-%m-%d")
    fh = logging.FileHandler(os.path.join(LOG_DIR, f"permucell_{today}.log"))
    fh.setFormatter(ShortNameFormatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    logger.addHandler(fh)

    logger.propagate = False
    return logger
