"""
Structured logging for xmoncoupler runs.

One JSON object per line on stderr (stdout carries the command output), or
a coloured console stream when XMONCOUPLER_ENV=development or DEBUG=1. The
run_id and the flux point being evaluated are merged in from contextvars;
LOG_LEVEL or --log-level selects the threshold.
"""

import os
import sys
import logging
import platform
import structlog
from typing import Any, Dict, Optional

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()


def add_app_context(logger: Any, method_name: str, event_dict: Dict) -> Dict:
    """Stamp every record with the service name and the host running the sweep."""
    event_dict["service"] = "xmoncoupler"
    event_dict["host"] = platform.node() or "local"
    return event_dict


def add_float_rounding(logger: Any, method_name: str, event_dict: Dict) -> Dict:
    """Keep physical quantities readable in log lines (full precision lives in CSV)."""
    for key, value in event_dict.items():
        if isinstance(value, float) and key != "timestamp":
            event_dict[key] = float(f"{value:.9g}")
    return event_dict


def _stderr_logger_factory(*args: Any) -> structlog.PrintLogger:
    # sys.stderr is looked up per logger, not at import
    return structlog.PrintLogger(file=sys.stderr)


def configure_structlog(level: Optional[str] = None) -> None:
    """
    Configure structlog for the application.

    Args:
        level: Optional level name overriding LOG_LEVEL (e.g. "DEBUG")
    """
    is_dev = os.getenv("XMONCOUPLER_ENV") == "development" or os.getenv("DEBUG") == "1"
    level_name = (level or os.getenv("LOG_LEVEL", LOG_LEVEL)).upper()

    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso", utc=True),
        add_app_context,
        add_float_rounding,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if is_dev:
        processors.append(structlog.dev.ConsoleRenderer())
    else:
        processors.append(structlog.processors.JSONRenderer())

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level_name)
        ),
        context_class=dict,
        logger_factory=_stderr_logger_factory,
        cache_logger_on_first_use=False,
    )


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    """
    Get a configured structlog logger.

    Args:
        name: Optional logger name (defaults to calling module)

    Returns:
        Configured structlog logger
    """
    return structlog.get_logger(name)


# Configure logging on module import
configure_structlog()
