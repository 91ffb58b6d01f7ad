"""Identity-check reports shared by the symbolic verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .opalg import OperatorExpr

__all__ = ["Check", "VerificationReport"]


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    residual: str

    @property
    def passed(self) -> bool:
        return self.residual == "0"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "residual": self.residual,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, actual: OperatorExpr, expected: OperatorExpr) -> Check:
        """Record ``actual - expected``; residuals are canonical text."""
        residual = OperatorExpr.coerce(actual) - OperatorExpr.coerce(expected)
        check = Check(name, OperatorExpr.coerce(expected).to_text(), residual.to_text())
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __len__(self):
        return len(self.checks)

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures),
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"# {self.title}: {len(self.checks) - len(self.failures)}/{len(self.checks)} passed"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status}  {c.name}"
            if not c.passed:
                line += f"    residual: {c.residual}"
            lines.append(line)
        return "\n".join(lines) + "\n"
