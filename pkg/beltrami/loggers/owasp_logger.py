"""
OWASP-compliant audit logger configuration for Beltrami runs.
"""

import json
import logging
import os
import tempfile
from datetime import datetime
from pathlib import Path
from typing import Optional

OWASP_LOGGER_NAME = "owasp"


def security_log_dir() -> Path:
    return Path(tempfile.gettempdir()) / "beltrami-outdir" / "security_logs"


class PrettyJSONFormatter(logging.Formatter):
    """
    Indents JSON event messages with sorted keys and leaves anything else
    as it is. The record itself is not modified, so other handlers still
    see the compact message.
    """

    def format(self, record: logging.LogRecord) -> str:
        message = record.getMessage()
        try:
            pretty = json.dumps(json.loads(message), indent=2, sort_keys=True)
        except ValueError:
            return super().format(record)

        copy = logging.makeLogRecord(record.__dict__)
        copy.msg, copy.args = pretty, ()
        return super().format(copy)


def get_owasp_logger(log_dir: Optional[Path] = None) -> logging.Logger:
    """
    The dedicated audit logger, writing to one file per process.

    The file is created on the first call; later calls return the same
    logger whatever log_dir they pass.

    Arguments:
        log_dir: directory of the log files, security_log_dir() if None

    Returns:
        logging.Logger: the non-propagating "owasp" logger
    """
    logger = logging.getLogger(OWASP_LOGGER_NAME)
    logger.propagate = False
    if logger.handlers:
        return logger

    log_dir = Path(log_dir) if log_dir is not None else security_log_dir()
    log_dir.mkdir(parents=True, exist_ok=True)
    # parallel test workers start within the same second
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = log_dir / f"owasp_{timestamp}_{os.getpid()}.log"

    handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
    handler.setFormatter(
        PrettyJSONFormatter("%(asctime)s | %(levelname)s | %(message)s")
    )
    logger.addHandler(handler)
    return logger
