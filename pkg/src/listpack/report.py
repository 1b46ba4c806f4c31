from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a validation pass; truthy when no violation was recorded."""

    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, message: str) -> None:
        self.violations.append(message)

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(self.violations)
