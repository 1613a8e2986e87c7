from logging import FileHandler, Formatter, Handler, Logger, StreamHandler, getLogger
from typing import Optional

from core.config import LogConfig

ROOT_LOGGER_NAME = "core"


def setup(config: LogConfig, force: bool = False, level: Optional[str] = None) -> Optional[Handler]:
    """
    Set up logging for the `core` package based on the configuration.

    The method is idempotent unless `force` is set to True,
    in which case it will reconfigure the logging.

    :param config: Logging configuration.
    :param force: Replace previously installed handlers.
    :param level: Optional level overriding the configured one (e.g. from the command line).
    :return: The installed handler, or None if logging was already set up.
    """
    logger = getLogger(ROOT_LOGGER_NAME)
    if logger.handlers and not force:
        return None

    while logger.handlers:
        handler = logger.handlers[0]
        logger.removeHandler(handler)
        handler.close()

    level = (level or config.level).upper()
    if config.output:
        handler = FileHandler(config.output, encoding="utf-8")
    else:
        handler = StreamHandler()

    handler.setFormatter(Formatter(config.format))
    handler.setLevel(level)

    logger.setLevel(level)
    logger.addHandler(handler)
    # Reports go to stdout; keep log records away from the root handlers
    logger.propagate = False
    return handler


def get_logger(name) -> Logger:
    """
    Get log function for a given (module) name

    :return: Logger instance
    """
    return getLogger(name)


__all__ = ["setup", "get_logger"]
