"""
Logging for the CLI, the verification suites and the gateway.

stdout is reserved for the JSON-lines report, so every handler writes to stderr.
While a suite runs, ``run_context`` attaches its name, seed and worker pid to every record;
suites running in pool workers are then still attributable in an interleaved log.
"""

import contextvars
import json
import logging
import os
import sys
from collections.abc import Iterator
from contextlib import contextmanager

from core.config import LOG_FORMAT, LOG_LEVEL

_run_context: contextvars.ContextVar[dict[str, object] | None] = contextvars.ContextVar("run_context", default=None)

# record attributes a caller may pass through ``extra=``; the JSON formatter lifts them to top level
REPORT_FIELDS = ("check", "suite", "q0", "L")


@contextmanager
def run_context(**fields: object) -> Iterator[dict[str, object]]:
    """Tag records emitted inside the block, e.g. ``run_context(suite="fodc", seed=7)``."""
    merged = {**(_run_context.get() or {}), **fields, "pid": os.getpid()}
    token = _run_context.set(merged)
    try:
        yield merged
    finally:
        _run_context.reset(token)


def get_run_context() -> dict[str, object]:
    return dict(_run_context.get() or {})


def _context_label(context: dict[str, object]) -> str:
    return " ".join(f"{key}={value}" for key, value in context.items() if key != "pid")


class ColoredFormatter(logging.Formatter):
    """One line per record; ANSI colours only when stderr is a terminal."""

    RESET = "\033[0m"
    GRAY = "\033[90m"
    PURPLE = "\033[35m"
    LEVEL_COLORS = {
        logging.DEBUG: "\033[36m",
        logging.INFO: "\033[32m",
        logging.WARNING: "\033[33m",
        logging.ERROR: "\033[31m",
        logging.CRITICAL: "\033[1;31m",
    }

    def __init__(self, use_color: bool | None = None):
        super().__init__(datefmt="%H:%M:%S")
        self.use_color = sys.stderr.isatty() if use_color is None else use_color

    def _paint(self, text: str, color: str) -> str:
        return f"{color}{text}{self.RESET}" if self.use_color else text

    def format(self, record):
        context = get_run_context()
        label = _context_label(context)
        scope = f" {self._paint(f'[{label}]', self.PURPLE)}" if label else ""
        color = self.LEVEL_COLORS.get(record.levelno, "")
        line = (
            f"{self._paint(self.formatTime(record, self.datefmt), self.GRAY)} │ "
            f"{self._paint(f'{record.levelname:<8}', color)} │ "
            f"{record.name:<10}{scope} │ {record.getMessage()}"
        )
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


class StructuredJsonFormatter(logging.Formatter):
    """JSON object per record with the run context and any report fields flattened in."""

    def format(self, record):
        payload: dict[str, object] = {
            "timestamp": self.formatTime(record, "%Y-%m-%dT%H:%M:%S%z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            **get_run_context(),
        }
        for name in REPORT_FIELDS:
            value = getattr(record, name, None)
            if value is not None:
                payload[name] = str(value)
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, sort_keys=True)


def setup_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredJsonFormatter() if LOG_FORMAT == "json" else ColoredFormatter())
        logger.addHandler(handler)
        logger.setLevel(getattr(logging, LOG_LEVEL.upper(), logging.INFO))
        logger.propagate = False
    return logger
