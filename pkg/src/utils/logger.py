"""
Logging configuration for the training toolkit.

Records carry a ``pair`` field naming the one-versus-one class pair being
trained, so interleaved output from parallel workers stays attributable.
"""

import logging
import sys
from contextlib import contextmanager
from contextvars import ContextVar
from pathlib import Path
from typing import Iterator, Optional, Union

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s%(pair)s: %(message)s'

_current_pair: ContextVar[str] = ContextVar('coreball_pair', default='')


class PairFilter(logging.Filter):
    """Stamp each record with the active class pair, if any"""

    def filter(self, record: logging.LogRecord) -> bool:
        pair = _current_pair.get()
        record.pair = f" [{pair}]" if pair else ''
        return True


@contextmanager
def pair_context(positive: int, negative: int) -> Iterator[None]:
    """Tag log records emitted in this thread with ``positive/negative``"""
    token = _current_pair.set(f"{positive}/{negative}")
    try:
        yield
    finally:
        _current_pair.reset(token)


def setup_logging(level: Union[int, str] = logging.INFO, log_file: Optional[str] = None):
    """
    Setup logging configuration.

    Args:
        level: Logging level or its name (default: INFO)
        log_file: Optional log file path
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    handlers = [logging.StreamHandler(sys.stdout)]

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    for handler in handlers:
        handler.addFilter(PairFilter())

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt='%Y-%m-%d %H:%M:%S',
        handlers=handlers,
        force=True
    )


def get_logger(name: str) -> logging.Logger:
    """Logger for a module (typically ``__name__``)"""
    return logging.getLogger(name)
