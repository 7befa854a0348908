"""
foldcast - Logging Configuration
"""

import logging
import sys

import structlog

from foldcast.core.config import settings


def setup_logging(level: str | None = None) -> None:
    """Configure structured logging.

    Records go to stderr; stdout is reserved for CLI results.
    """
    use_json = settings.LOG_JSON or settings.ENV == "production"
    level_name = (level or settings.LOG_LEVEL).upper()

    processors = [
        structlog.stdlib.filter_by_level,
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
    ]

    if use_json:
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level_name),
        force=True,
    )
