import logging

from rich.logging import RichHandler

from utils.logger import FILE_FORMAT, ShortNameFormatter, setup_logger


def test_file_lines_carry_pid_and_short_name():
    record = logging.LogRecord("complexes.chain", logging.WARNING, __file__, 1, "d∘d ≠ 0", None, None)
    line = ShortNameFormatter(FILE_FORMAT).format(record)
    assert f"pid={record.process}" in line
    assert "WARNING" in line
    assert line.endswith("[chain] d∘d ≠ 0")


def test_handlers_are_added_once():
    logger = setup_logger("permucell.test_handlers")
    again = setup_logger("permucell.test_handlers")
    assert logger is again
    assert len(logger.handlers) == 2
    assert isinstance(logger.handlers[0], RichHandler)
    assert isinstance(logger.handlers[1], logging.FileHandler)
    assert not logger.propagate
