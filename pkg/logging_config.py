"""
Structured JSON logging for the sesquiad engine.

One JSON object per line on stderr, plus a dated file under SESQ_LOG_DIR when
that is set.  Stdout belongs to reports.
"""
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from engine_settings import get_settings

SERVICE = "sesquiad-engine"


class JSONFormatter(logging.Formatter):
    """Render a record as one JSON line; extra_fields are merged in"""

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "service": SERVICE,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        if record.threadName and record.threadName != "MainThread":
            entry["thread"] = record.threadName
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
            entry["exception_type"] = record.exc_info[0].__name__ if record.exc_info[0] else None

        entry.update(getattr(record, "extra_fields", None) or {})
        for key in ("run_id", "command"):
            value = getattr(record, key, None)
            if value:
                entry[key] = value
        return json.dumps(entry, ensure_ascii=False, default=str)


class EngineLogger:
    """Thin wrapper that turns keyword arguments into structured fields"""

    def __init__(self, name: str = "sesquiad_engine", log_level: str = "WARNING",
                 log_dir: Optional[str] = None):
        self.logger = logging.getLogger(name)
        self.logger.propagate = False
        self.logger.handlers.clear()
        self.set_level(log_level)

        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(JSONFormatter())
        self.logger.addHandler(stream)

        if log_dir:
            path = Path(log_dir)
            path.mkdir(parents=True, exist_ok=True)
            handler = logging.FileHandler(path / f"{SERVICE}-{datetime.now():%Y%m%d}.log", encoding="utf-8")
            handler.setFormatter(JSONFormatter())
            self.logger.addHandler(handler)

    def set_level(self, log_level: str):
        self.logger.setLevel(getattr(logging, log_level.upper(), logging.WARNING))

    def _log(self, level: int, message: str, fields: Dict[str, Any], **kwargs):
        extra = {"extra_fields": fields} if fields else {}
        extra.update(kwargs)
        self.logger.log(level, message, extra=extra)

    def info(self, message: str, **fields):
        self._log(logging.INFO, message, fields)

    def warning(self, message: str, **fields):
        self._log(logging.WARNING, message, fields)

    def error(self, message: str, **fields):
        self._log(logging.ERROR, message, fields)

    def debug(self, message: str, **fields):
        self._log(logging.DEBUG, message, fields)

    def exception(self, message: str, **fields):
        extra = {"extra_fields": fields} if fields else {}
        self.logger.exception(message, extra=extra)

    def log_command(self, command: str, run_id: Optional[str] = None, **fields):
        """One line per CLI invocation, tagged with its run id"""
        self._log(logging.INFO, f"Command: {command}", fields, run_id=run_id, command=command)

    def log_enumeration(self, kind: str, **fields):
        """Size of an enumeration phase"""
        self._log(logging.DEBUG, f"Enumeration: {kind}", dict(fields, enumeration=kind))


_logger_instance: Optional[EngineLogger] = None


def get_logger(name: str = "sesquiad_engine", log_level: Optional[str] = None) -> EngineLogger:
    """Get or create the engine logger; a given level is applied either way"""
    global _logger_instance
    if _logger_instance is None:
        settings = get_settings()
        _logger_instance = EngineLogger(name, log_level or settings.log_level, settings.log_dir)
    elif log_level:
        _logger_instance.set_level(log_level)
    return _logger_instance


def setup_logging(log_level: Optional[str] = None) -> EngineLogger:
    """Configure the engine logger for a CLI run"""
    return get_logger(log_level=log_level or get_settings().log_level)
