"""Result records shared by the bound modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class BoundReport:
    method: str
    direction: str  # "upper" or "lower"
    value: Any  # Fraction when exact, mpf/float otherwise
    certificate: Any = None
    notes: str = ""
    attained: bool | None = None
    quadrature: Any = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.direction not in ("upper", "lower"):
            raise ValueError(f"direction must be 'upper' or 'lower', got {self.direction!r}")


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of checking a certificate: bound on success, first violation otherwise."""

    valid: bool
    bound: Any = None
    condition: str | None = None
    index: Any = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid
