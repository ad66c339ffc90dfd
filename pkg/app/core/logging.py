# app/core/logging.py
import logging
import sys

LOG_FORMAT = "[%(name)s] %(levelname)s %(message)s"

_HANDLER_NAME = "ndlat"


def configure_logging(level: str | int = "INFO") -> None:
    """Attach a single stderr handler to the root logger (safe to call twice)."""
    root = logging.getLogger()
    if isinstance(level, str):
        level = level.upper()
    root.setLevel(level)

    for handler in root.handlers:
        if handler.get_name() == _HANDLER_NAME:
            handler.setLevel(level)
            return

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.setLevel(level)
    root.addHandler(handler)
