import logging
import sys

_CREATED: set[str] = set()


def setup_logger(name: str = "qwalk", level: int | str = logging.INFO) -> logging.Logger:
    """
    Setup a standardized logger.
    
    Args:
        name: Name of the logger
        level: Logging level, as an int or a name such as "DEBUG" (default: logging.INFO)
        
    Returns:
        logging.Logger: Configured logger instance
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logger = logging.getLogger(name)
    
    # Check if handlers already exist to avoid duplicates
    if not logger.handlers:
        logger.setLevel(level)
        handler = logging.StreamHandler(sys.stdout)
        handler.setLevel(logging.NOTSET)
        
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False
        _CREATED.add(name)
        
    return logger


def set_global_level(level: int | str) -> None:
    """
    Change the level of every logger created through setup_logger.
    Used by the CLI --verbose / --quiet switches.
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    for name in _CREATED:
        logging.getLogger(name).setLevel(level)
