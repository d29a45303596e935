import json
import logging
import os
import sys

from core.logger import ColoredFormatter, StructuredJsonFormatter, get_run_context, run_context, setup_logger


def _record(message: str = "suite started", **extra) -> logging.LogRecord:
    record = logging.LogRecord("SUITES", logging.INFO, __file__, 1, message, None, None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


class TestRunContext:
    def test_empty_outside_block(self):
        assert get_run_context() == {}

    def test_fields_and_pid(self):
        with run_context(suite="fodc", seed=7) as context:
            assert context == {"suite": "fodc", "seed": 7, "pid": os.getpid()}
            assert get_run_context() == context
        assert get_run_context() == {}

    def test_nested_blocks_merge(self):
        with run_context(suite="haar"):
            with run_context(check="haar_of_one"):
                assert get_run_context()["suite"] == "haar"
                assert get_run_context()["check"] == "haar_of_one"
            assert "check" not in get_run_context()


class TestStructuredJsonFormatter:
    def test_context_and_report_fields(self):
        with run_context(suite="spectral", seed=3):
            line = StructuredJsonFormatter().format(_record(check="tau_trace", L=20))
        payload = json.loads(line)
        assert payload["suite"] == "spectral"
        assert payload["seed"] == 3
        assert payload["check"] == "tau_trace"
        assert payload["L"] == "20"
        assert payload["message"] == "suite started"
        assert list(payload) == sorted(payload)

    def test_exception_is_included(self):
        try:
            raise ZeroDivisionError("norm vanished")
        except ZeroDivisionError:
            record = _record()
            record.exc_info = sys.exc_info()
        payload = json.loads(StructuredJsonFormatter().format(record))
        assert "ZeroDivisionError: norm vanished" in payload["exception"]


class TestColoredFormatter:
    def test_plain_when_not_a_terminal(self):
        with run_context(suite="corep"):
            line = ColoredFormatter(use_color=False).format(_record())
        assert "\033[" not in line
        assert "[suite=corep]" in line
        assert line.endswith("suite started")

    def test_colored_level(self):
        line = ColoredFormatter(use_color=True).format(_record())
        assert ColoredFormatter.LEVEL_COLORS[logging.INFO] in line


class TestSetupLogger:
    def test_writes_to_stderr_once(self):
        logger = setup_logger("TEST_LOGGER")
        again = setup_logger("TEST_LOGGER")
        assert logger is again
        assert len(logger.handlers) == 1
        assert logger.handlers[0].stream is sys.stderr
        assert logger.propagate is False
