"""Pass/fail bookkeeping for the grid and sample based axiom checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    checked: int
    witness: dict[str, Any] | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{self.name:<22} {status}  ({self.checked} checks)"
        if self.witness is not None:
            text += "  witness: " + ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return text


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of an axiom check: one :class:`AxiomResult` per axiom, in check order."""

    results: tuple[AxiomResult, ...]
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]
