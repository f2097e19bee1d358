"""
Error types shared by every engine module.

Each error carries the name used in reports (``code``) and a kind that the
CLI turns into an exit code.
"""

from enum import Enum
from typing import Any, Dict, Optional


class ErrorKind(Enum):
    """Error category and the exit code it maps to"""
    USAGE = 1
    DOMAIN = 2
    LIMIT = 3

    @property
    def exit_code(self) -> int:
        return self.value


class EngineError(Exception):
    """Base class for all engine errors"""

    kind = ErrorKind.DOMAIN

    def __init__(self, code: str, message: str, **details: Any):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "kind": self.kind.name.lower(),
            "code": self.code,
            "message": self.message,
        }
        if self.details:
            data["details"] = {k: self.details[k] for k in sorted(self.details)}
        return data


class UsageError(EngineError):
    kind = ErrorKind.USAGE


class DomainError(EngineError):
    kind = ErrorKind.DOMAIN


class LimitError(EngineError):
    kind = ErrorKind.LIMIT


class DocumentError(UsageError):
    """Syntax error in a sesquiad document, with its position"""

    def __init__(self, message: str, line: int, column: int = 1,
                 code: str = "SyntaxError", **details: Any):
        super().__init__(code, f"line {line}, column {column}: {message}",
                         line=line, column=column, **details)
        self.line = line
        self.column = column


def error_report(error: EngineError, command: Optional[str] = None) -> Dict[str, Any]:
    """Structured error body used by reports"""
    report: Dict[str, Any] = {"status": "error", "error": error.to_dict()}
    if command:
        report["command"] = command
    return report
