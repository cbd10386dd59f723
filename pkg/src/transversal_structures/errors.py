"""Error hierarchy and verifier reports shared by every module.

All errors subclass ``ValueError`` and carry a stable ``code``; the message
always starts with that code so callers can match on it.
"""

from dataclasses import dataclass, field
from typing import Optional

# Error codes and what they signal
ERROR_CODES = {
    "NON_PLANAR_ROTATION": "rotation system violates the Euler relation",
    "DISCONNECTED": "the graph is not connected",
    "BAD_OUTER_HINT": "the outer-face hint is not a face cycle",
    "DUPLICATE_EDGE": "a rotation list names the same neighbour twice",
    "SELF_LOOP": "a vertex lists itself as a neighbour",
    "MISSING_TWIN": "an edge appears in only one endpoint's rotation list",
    "NOT_QUAD_OUTER": "the outer face is not a quadrangle",
    "NON_TRIANGULAR_INNER_FACE": "an inner face is not a triangle",
    "SEPARATING_TRIANGLE": "a 3-cycle does not bound a face",
    "BAD_LABEL_ORDER": "W, N, E, S are not the outer face in clockwise order",
    "BAD_TREE_WORD": "not a prefix word of a ternary tree",
    "CAP_EXCEEDED": "size above the exhaustive-enumeration cap",
    "REPEATED_STEP": "a one-shot builder step was called again",
    "NO_ORIENTATION": "no orientation with the prescribed outdegrees",
    "STUCK": "the sweep found no admissible pair",
    "NOT_RIGHT_CYCLE": "the cycle is not a right alternating 4-cycle",
    "NOT_LEFT_CYCLE": "the cycle is not a left alternating 4-cycle",
    "NOT_MINIMAL": "the edge-partition is not the minimal one",
    "INVALID_PARTITION": "the edge-partition breaks a coloring or alternation condition",
    "BAD_FORMAT": "malformed input file",
    "BAD_VERTEX_IDS": "vertex ids are not the dense range 0..V-1",
    "BAD_SIZE": "size parameter out of range",
    "IDENTITY_FAILED": "a per-sample identity did not hold",
}


class TransversalError(ValueError):
    """Base class for all errors raised by this package."""

    def __init__(self, code: str, message: str, location: Optional[object] = None):
        if code not in ERROR_CODES:
            raise KeyError(f"Unknown error code {code!r}")
        self.code = code
        self.location = location
        super().__init__(f"{code}: {message}")


class MapError(TransversalError):
    """Invalid rotation system or triangulation."""


class TreeError(TransversalError):
    """Invalid ternary tree input or enumeration request."""


class StructureError(TransversalError):
    """Orientation, sweep or lattice operation failure."""


class FormatError(TransversalError):
    """Unparseable file content."""

    def __init__(self, message: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__("BAD_FORMAT", f"{message}{where}", location=line)


class ExperimentError(TransversalError):
    """A statistics sample broke one of the drawing identities."""


@dataclass(frozen=True)
class Violation:
    """One failed condition found by a verifier."""

    condition: str
    message: str
    location: Optional[object] = None

    def __str__(self) -> str:
        return f"{self.condition}: {self.message}"


@dataclass
class Report:
    """Outcome of a verifier; verifiers collect violations instead of raising."""

    subject: str
    violations: list[Violation] = field(default_factory=list)

    def add(self, condition: str, message: str, location: Optional[object] = None) -> None:
        self.violations.append(Violation(condition, message, location))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: pass"
        lines = [f"{self.subject}: FAIL ({len(self.violations)} violations)"]
        lines.extend(f"  {v}" for v in self.violations)
        return "\n".join(lines)
