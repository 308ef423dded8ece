import logging
import logging.config
from io import StringIO
from unittest.mock import patch

from app.core.logging_config import LOGGING_CONFIG, build_logging_config, setup_logging


def test_logging_config_structure():
    """Test the structure of the LOGGING_CONFIG dictionary."""
    assert "version" in LOGGING_CONFIG
    assert "disable_existing_loggers" in LOGGING_CONFIG
    assert "default" in LOGGING_CONFIG["formatters"]
    assert "format" in LOGGING_CONFIG["formatters"]["default"]

    console = LOGGING_CONFIG["handlers"]["console"]
    assert console["class"] == "logging.StreamHandler"
    # stdout carries the JSON report
    assert console["stream"] == "ext://sys.stderr"

    assert LOGGING_CONFIG["root"]["level"] == "INFO"
    assert LOGGING_CONFIG["root"]["handlers"] == ["console"]


def test_setup_logging_default():
    """Without a level the module config is applied as is."""
    with patch("logging.config.dictConfig") as mock_dict_config:
        setup_logging()
        mock_dict_config.assert_called_once_with(LOGGING_CONFIG)


def test_setup_logging_with_level():
    with patch("logging.config.dictConfig") as mock_dict_config:
        setup_logging("debug")
        config = mock_dict_config.call_args[0][0]
        assert config["root"]["level"] == "DEBUG"


def test_build_logging_config_does_not_mutate():
    config = build_logging_config("warning")
    assert config["root"]["level"] == "WARNING"
    assert LOGGING_CONFIG["root"]["level"] == "INFO"
    assert build_logging_config(None)["root"]["level"] == "INFO"


def test_logging_levels():
    """Test that the configured level filters messages."""
    setup_logging("WARNING")
    stream = StringIO()
    logger = logging.getLogger()
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(levelname)s - %(message)s"))
    logger.addHandler(handler)
    try:
        assert logger.getEffectiveLevel() == logging.WARNING
        logging.getLogger("app.services").info("suite finished")
        assert stream.getvalue() == ""
        logging.getLogger("app.services").warning("check failed")
        assert "WARNING - check failed" in stream.getvalue()
    finally:
        logger.removeHandler(handler)
        setup_logging()


def test_logging_format():
    """Test that the log format carries the logger name and level."""
    setup_logging()
    stream = StringIO()
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(LOGGING_CONFIG["formatters"]["default"]["format"]))
    logger = logging.getLogger("test_format")
    logger.addHandler(handler)
    try:
        logger.info("Test format message")
        output = stream.getvalue()
        assert "Test format message" in output
        assert "test_format" in output
        assert "INFO" in output
    finally:
        logger.removeHandler(handler)
