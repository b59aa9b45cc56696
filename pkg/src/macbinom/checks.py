"""Result record shared by every identity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .exact import ZERO, FieldElement


@dataclass(frozen=True)
class Check:
    """One verified identity instance; ``residual`` must be exactly zero."""

    name: str
    case: dict[str, Any] = field(default_factory=dict)
    residual: FieldElement = ZERO

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.case.items())
        status = "pass" if self.ok else f"FAIL residual={self.residual}"
        return f"{self.name}({args}): {status}"


def flag(name: str, ok: bool, **case) -> Check:
    """Boolean checks reuse the record with residual 0 or 1."""
    return Check(name, case, ZERO if ok else FieldElement(1))
