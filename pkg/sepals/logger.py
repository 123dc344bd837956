import logging

from sepals.config import LOG_LEVEL

FORMAT = "[%(asctime)s] [%(levelname)s] %(message)s"


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    root = logging.getLogger("sepals")
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(FORMAT))
        root.addHandler(handler)
        root.setLevel(LOG_LEVEL)
    return logger


def set_level(level: str) -> None:
    logging.getLogger("sepals").setLevel(level.upper())
