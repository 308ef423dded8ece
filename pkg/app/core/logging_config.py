import copy
import logging.config
from typing import Any, Dict, Optional

LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "default",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {
        "level": "INFO",
        "handlers": ["console"],
    },
}


def build_logging_config(level: Optional[str] = None) -> Dict[str, Any]:
    """Return a copy of LOGGING_CONFIG with the root level overridden."""
    config = copy.deepcopy(LOGGING_CONFIG)
    if level:
        config["root"]["level"] = level.upper()
    return config


def setup_logging(level: Optional[str] = None):
    """
    Setup logging configuration.
    """
    if level is None:
        logging.config.dictConfig(LOGGING_CONFIG)
    else:
        logging.config.dictConfig(build_logging_config(level))
