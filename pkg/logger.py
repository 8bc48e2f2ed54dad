import json
import logging
import os
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler

from utils import LOG_DIR, LOG_FILE, LOG_LEVEL


class JsonFormatter(logging.Formatter):
    """Formats logs as JSON lines."""

    def format(self, record):
        log_entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if hasattr(record, "ring"):
            log_entry["ring"] = record.ring

        if hasattr(record, "tau"):
            log_entry["tau"] = record.tau

        if hasattr(record, "extra_data"):
            log_entry["extra"] = record.extra_data

        return json.dumps(log_entry, default=str)


def get_logger(name="taufact"):
    logger = logging.getLogger(name)

    if logger.handlers:
        return logger

    logger.setLevel(LOG_LEVEL)
    logger.propagate = False

    # Stream → stderr; stdout carries reports
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(JsonFormatter())
    logger.addHandler(stream_handler)

    # File handler → rotating JSONL file
    try:
        os.makedirs(LOG_DIR, exist_ok=True)
        file_handler = RotatingFileHandler(
            LOG_FILE, maxBytes=2_000_000, backupCount=5
        )
    except OSError as e:
        logger.warning("log_file_unavailable", extra={"extra_data": {"error": str(e)}})
    else:
        file_handler.setFormatter(JsonFormatter())
        logger.addHandler(file_handler)

    return logger
