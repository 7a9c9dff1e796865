from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"CHECK {self.name} {status}"
        if self.witness is not None:
            out += f" {_fmt(self.witness)}"
        return out


def _fmt(w) -> str:
    if isinstance(w, tuple) and hasattr(w, "_fields"):
        return "[" + ",".join(str(x) for x in w) + "]"
    if isinstance(w, (tuple, list)):
        return "(" + " ".join(_fmt(x) for x in w) + ")"
    return str(w)


@dataclass
class ValidationReport:
    """Ordered list of named checks; failed checks carry a witness."""

    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, witness=None) -> None:
        """Record `name` as passed when `witness` is None, failed otherwise."""
        self.checks.append(Check(name, witness is None, witness))

    def extend(self, other: ValidationReport) -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        return "\n".join(c.line() for c in self.checks)
