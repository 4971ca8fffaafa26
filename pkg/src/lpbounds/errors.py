"""Exception types and resource guards."""
from __future__ import annotations

import os


class LPBoundsError(Exception):
    """Base class for library errors."""


class ResourceLimitError(LPBoundsError):
    """An exhaustive computation would exceed the configured work limit."""


class InvariantError(LPBoundsError):
    """An internal consistency check failed (a bug, never a user error)."""


class CertificateViolation(LPBoundsError, ValueError):
    def __init__(self, condition: str, index, message: str = ""):
        self.condition = condition
        self.index = index
        super().__init__(message or f"condition {condition} fails at index {index}")


class CodeFormatError(LPBoundsError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


DEFAULT_MAX_WORK = 10**8


def max_work(default: int = DEFAULT_MAX_WORK) -> int:
    raw = os.environ.get("LPBOUNDS_MAX_WORK")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            pass
    return default


def check_work(amount: int, default: int, what: str) -> None:
    limit = max_work(default)
    if amount > limit:
        raise ResourceLimitError(f"{what}: work {amount} exceeds limit {limit} (set LPBOUNDS_MAX_WORK to raise it)")
