"""Type definitions for nckit results and reports."""

from __future__ import annotations

import dataclasses
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class SatOutcome(Enum):
    """Outcome of a bounded satisfiability search."""

    SAT = "sat"
    UNSAT_UP_TO = "unsat-up-to"
    UNSAT_CERTIFIED = "unsat-certified"


class RejectionKind(Enum):
    """Why a proof line was rejected."""

    UNKNOWN_RULE = "unknown-rule"
    MALFORMED_REFERENCE = "malformed-reference"
    MISMATCH = "mismatch"
    PREMISE_DEPENDENCY = "premise-dependency"


@dataclass(frozen=True)
class PropertyCheck:
    """Result of checking one frame property."""

    property: str
    holds: bool
    witness: tuple[str, ...] | None = None
    violated: str | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Countermodel:
    """A valuation and world at which a formula fails."""

    valuation: Mapping[str, frozenset[str]]
    world: str


@dataclass(frozen=True)
class ValidityResult:
    """Frame validity or entailment verdict with a witness on failure."""

    valid: bool
    valuations_checked: int
    countermodel: Countermodel | None = None

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class ClauseViolation:
    """A pair of a candidate bisimulation failing one clause."""

    pair: tuple[str, str]
    clause: str
    detail: str = ""


@dataclass
class BisimReport:
    """Clause-by-clause verdict on a candidate bisimulation."""

    kind: str
    pairs_checked: int
    violations: list[ClauseViolation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        """True when no clause is violated."""
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class LineVerdict:
    """Verdict on one proof line."""

    index: int
    ok: bool
    rule: str
    kind: RejectionKind | None = None
    reason: str = ""
    premise_dependent: bool = False


@dataclass
class ProofReport:
    """Verdict on a whole proof script."""

    system: str
    verdicts: list[LineVerdict] = field(default_factory=list)
    theorems: list[Any] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when every line checks."""
        return all(verdict.ok for verdict in self.verdicts)

    @property
    def rejected(self) -> list[LineVerdict]:
        """Lines that failed to check."""
        return [verdict for verdict in self.verdicts if not verdict.ok]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SatResult:
    """Outcome of ``satisfiable`` with the searched bound and frame class."""

    outcome: SatOutcome
    bound: int
    frame_class: tuple[str, ...]
    candidates_examined: int
    certified_bound: int | None = None
    model: Any = None
    world: str | None = None

    @property
    def satisfiable(self) -> bool:
        """True when a satisfying pointed model was found."""
        return self.outcome is SatOutcome.SAT

    def __bool__(self) -> bool:
        return self.satisfiable


def to_jsonable(value: Any) -> Any:
    """Convert results into JSON-ready values with a deterministic layout.

    Dataclasses become dicts, enums their values, sets sorted lists, and
    objects with a ``to_json`` method (formulas, frames, models) their
    document form.
    """
    if hasattr(value, "to_json"):
        return value.to_json()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        document = {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
        for name in ("valid", "ok", "satisfiable"):
            attr = getattr(type(value), name, None)
            if isinstance(attr, property):
                document[name] = getattr(value, name)
        return document
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in sorted(value.items(), key=_key)}
    if isinstance(value, (set, frozenset)):
        return sorted((to_jsonable(item) for item in value), key=_key)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    return value


def _key(item: Any) -> str:
    return repr(item)
