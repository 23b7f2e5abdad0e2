"""Exception types and the small validation report shared by all validators."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

DEFAULT_BUDGET = 10**6


class InputError(ValueError):
    """Malformed input: unknown identifiers, mismatched endpoints, bad data."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class ResourceError(RuntimeError):
    """An enumeration exceeded its budget."""


class ConsistencyError(AssertionError):
    """Two independent computations that must agree did not.

    This signals a bug in the library (or a counterexample to a theorem),
    never bad user input.
    """


def default_budget() -> int:
    raw = os.environ.get("QWB_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"QWB_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("QWB_BUDGET must be positive")
    return value


class Budget:
    """A countdown shared by one enumeration."""

    def __init__(self, limit: int | None = None, what: str = "enumeration"):
        self.limit = default_budget() if limit is None else limit
        self.used = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ResourceError(f"{self.what} exceeded its budget of {self.limit} candidates")


@dataclass
class ValidationReport:
    subject: str
    failures: list[tuple[str, Any]] = field(default_factory=list)
    max_per_law: int = 5
    _counts: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, law: str, witness: Any) -> None:
        n = self._counts.get(law, 0)
        self._counts[law] = n + 1
        if n < self.max_per_law:
            self.failures.append((law, witness))

    def laws_failed(self) -> set[str]:
        return {law for law, _ in self.failures}

    def raise_if_failed(self) -> None:
        if self.failures:
            law, witness = self.failures[0]
            raise InputError(f"{self.subject}: {law} fails at {witness!r}")

    def __bool__(self) -> bool:
        return self.ok
