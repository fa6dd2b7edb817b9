import logging
import sys

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(name=None, level=logging.INFO, fmt=DEFAULT_FORMAT):
    """Set up a logger with consistent formatting.

    This function configures a logger with a standard format that includes
    timestamp, logger name, log level, and message. It ensures that handlers
    are not duplicated if the logger already exists.

    Parameters
    ----------
    name : str, optional
        Logger name. If None, returns the root logger, by default None
    level : int or str, optional
        Logging level, either numeric (``logging.DEBUG``) or a level name as
        written in ``config.toml`` (``"DEBUG"``), by default logging.INFO
    fmt : str, optional
        Format string for the stream handler, by default DEFAULT_FORMAT

    Returns
    -------
    logging.Logger
        Configured logger instance with the specified name and level
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(name)

    if not logger.handlers:  # Only add handler if none exists
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(logging.Formatter(fmt))
        logger.addHandler(handler)

    logger.setLevel(level)
    return logger


def set_package_level(level, fmt=DEFAULT_FORMAT):
    """Apply ``level`` to every ``cosinelaw`` logger created so far."""
    for name in list(logging.Logger.manager.loggerDict):
        if name.startswith("cosinelaw."):
            setup_logger(name, level=level, fmt=fmt)
