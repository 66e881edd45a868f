"""Report-valued validation shared by all structure kinds."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: tuple
    message: str

    def as_dict(self):
        return {"rule": self.rule, "witness": list(self.witness), "message": self.message}


@dataclass
class ValidationReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, witness: tuple, message: str) -> None:
        self.violations.append(Violation(rule, witness, message))

    def as_dict(self):
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [v.as_dict() for v in self.violations],
            "notes": list(self.notes),
        }
