from __future__ import annotations

import logging
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Union

from infra.paths import LOG_DIR

# Configured once at startup by main.py; modules use get_logger(__name__).
# NCF_LOG_LEVEL sets the level when the caller passes none.
DEFAULT_FORMAT = "%(asctime)s %(levelname)s [%(name)s:%(lineno)d] %(message)s"
JSON_FORMAT = (
    '{"time":"%(asctime)s","level":"%(levelname)s","logger":"%(name)s","line":%(lineno)d,"msg":"%(message)s"}'
)
DEFAULT_LOGFILE = LOG_DIR / "ncformation.log"
LEVEL_ENV = "NCF_LOG_LEVEL"

# Chatty third-party loggers kept at WARNING
_QUIET = ("matplotlib", "urllib3", "opentelemetry")


def configure_logging(
    level: Union[str, int, None] = None,
    *,
    json: bool = False,
    logfile: str | Path | None = DEFAULT_LOGFILE,
) -> None:
    """
    Configure the root logger with a stdout handler and an optional file handler.

    Args:
        level: level name or int; None reads NCF_LOG_LEVEL, then INFO
        json: emit one JSON object per line
        logfile: file to append to; None disables file output
    """
    if level is None:
        level = os.getenv(LEVEL_ENV, "INFO")
    if isinstance(level, str):
        level = level.upper()

    formatter = logging.Formatter(JSON_FORMAT if json else DEFAULT_FORMAT)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stdout)]

    if logfile is not None:
        log_path = Path(logfile)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding="utf-8"))

    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(level)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)

    for name in _QUIET:
        logging.getLogger(name).setLevel(logging.WARNING)

    # Chain-classification fallbacks are reported through warnings.warn.
    logging.captureWarnings(True)


def get_logger(name: str) -> logging.Logger:
    """Namespaced logger; configure_logging() runs once at startup."""
    return logging.getLogger(name)


@contextmanager
def timed(logger: logging.Logger, label: str, level: int = logging.INFO) -> Iterator[None]:
    """Log how long the enclosed block took."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.log(level, "%s took %.2fs", label, time.perf_counter() - start)
