from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class BoundReport:
    """A bound value together with the hypotheses it was evaluated under.

    ``hypotheses_ok`` is False when the caller asked for parameters outside
    the theorem's range; the value is still computed so that grid scans stay
    total. ``flags`` names each violated hypothesis.
    """

    name: str
    value: float
    hypotheses_ok: bool
    theorem: str
    flags: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    comparison: float | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "hypotheses_ok": self.hypotheses_ok,
            "theorem": self.theorem,
            "flags": list(self.flags),
            "details": dict(self.details),
            "comparison": self.comparison,
        }


def flagged(name: str, theorem: str, value: float, flags: list[str], **details: Any) -> BoundReport:
    return BoundReport(
        name=name,
        value=float(value),
        hypotheses_ok=not flags,
        theorem=theorem,
        flags=list(flags),
        details=details,
    )
