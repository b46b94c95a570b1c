from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a verification run: pass/fail, how much was checked, first witness."""

    name: str
    passed: bool
    checked: int = 0
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict)
    parts: list["Report"] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def combine(cls, name: str, parts: list["Report"], **details) -> "Report":
        failed = next((p for p in parts if not p.passed), None)
        return cls(
            name=name,
            passed=failed is None,
            checked=sum(p.checked for p in parts),
            witness=None if failed is None else (failed.name, failed.witness),
            details=details,
            parts=parts,
        )

    def lines(self, indent: str = "") -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        line = f"{indent}[{status}] {self.name}: {self.checked} checks"
        if not self.passed and self.witness is not None:
            line += f"; witness {self.witness}"
        out = [line]
        for k, v in self.details.items():
            out.append(f"{indent}    {k} = {v}")
        for p in self.parts:
            out.extend(p.lines(indent + "  "))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
