import weakref
from functools import wraps
from typing import Any, Optional

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel, Field, field_validator, model_validator

from .errors import MapError
from .planar_map import (
    IrreducibleTriangulation,
    PlanarMap,
    build_map,
    validate_irreducible,
)

# Steps each builder has taken; a builder drops out once collected
TAKEN_STEPS: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def call_once(func=None):
    """Allow a builder step such as ``outer()`` or ``root()`` once per builder.

    A repeated step raises ``REPEATED_STEP`` before touching the builder.
    Usable bare or called: ``@call_once`` and ``@call_once()``.
    """

    def decorator(step):
        @wraps(step)
        def guarded(builder, *args, **kwargs):
            taken = TAKEN_STEPS.setdefault(builder, set())
            if step.__name__ in taken:
                raise MapError(
                    "REPEATED_STEP", f"{step.__name__}() may only be called once per builder"
                )
            taken.add(step.__name__)
            return step(builder, *args, **kwargs)

        return guarded

    return decorator if func is None else decorator(func)


class RotationSystem(BaseModel):
    """Validated input for ``build_map``: ccw neighbour lists plus optional labels."""

    model_config = {"extra": "forbid"}

    rotations: list[list[int]] = Field(
        description="Counterclockwise neighbour list of every vertex 0..V-1"
    )
    outer: Optional[tuple[int, int, int, int]] = Field(
        default=None, description="Outer vertices W, N, E, S in clockwise order"
    )
    root: Optional[tuple[int, int]] = Field(
        default=None, description="Tail and head of the marked root dart"
    )

    @model_validator(mode="before")
    @classmethod
    def normalize_rotations(cls, data: Any) -> Any:
        """Accept a ``{vertex: neighbours}`` mapping as well as a list."""
        if isinstance(data, dict) and isinstance(data.get("rotations"), dict):
            mapping = data["rotations"]
            keys = sorted(int(k) for k in mapping)
            if keys != list(range(len(keys))):
                raise ValueError(
                    f"BAD_VERTEX_IDS: expected vertices 0..{len(keys) - 1}, got {keys}"
                )
            data = {**data, "rotations": [list(mapping[k]) for k in sorted(mapping, key=int)]}
        return data

    @field_validator("rotations")
    @classmethod
    def validate_rotations(cls, v: list[list[int]]) -> list[list[int]]:
        """Reject empty systems, unknown ids and repeated neighbours."""
        if not v:
            raise ValueError("BAD_VERTEX_IDS: a rotation system needs at least one vertex")
        for vertex, nbrs in enumerate(v):
            if any(not 0 <= u < len(v) for u in nbrs):
                raise ValueError(f"BAD_VERTEX_IDS: vertex {vertex} names an unknown neighbour")
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"DUPLICATE_EDGE: vertex {vertex} repeats a neighbour")
        return v

    @model_validator(mode="after")
    def validate_labels(self) -> "RotationSystem":
        """Outer labels and the root dart must name existing vertices and edges."""
        count = len(self.rotations)
        if self.outer is not None:
            if len(set(self.outer)) != 4:
                raise ValueError("BAD_LABEL_ORDER: W, N, E, S must be distinct")
            if any(not 0 <= v < count for v in self.outer):
                raise ValueError("BAD_VERTEX_IDS: an outer label is not a vertex")
        if self.root is not None:
            tail, head = self.root
            if not 0 <= tail < count or head not in self.rotations[tail]:
                raise ValueError(f"BAD_VERTEX_IDS: root {tail}->{head} is not an edge")
        return self

    def to_map(self) -> PlanarMap:
        return build_map(self.rotations, self.outer)

    def to_triangulation(self) -> IrreducibleTriangulation:
        if self.outer is None:
            raise ValueError("outer labels are required for a triangulation")
        planar_map = self.to_map()
        root = None
        if self.root is not None:
            root = planar_map.dart_between(*self.root)
        return validate_irreducible(planar_map, self.outer, root)


class PlanarMapBuilder:
    """A builder for maps and triangulations.

    Validations are performed after all vertices are added, when build() is called.

    Usage:
    >>> tri = (
    ...     PlanarMapBuilder()
    ...     .vertex(0, [3, 4, 1])
    ...     ...
    ...     .outer(0, 1, 2, 3)
    ...     .build()
    ... )
    """

    def __init__(self):
        self.rotations: dict[int, list[int]] = {}
        self.outer_labels: Optional[tuple[int, int, int, int]] = None
        self.root_dart: Optional[tuple[int, int]] = None

    def vertex(self, v: int, neighbours: list[int]) -> Self:
        """Add vertex ``v`` with its neighbours in counterclockwise order."""
        if v in self.rotations:
            raise MapError("REPEATED_STEP", f"vertex {v} is already added")
        self.rotations[v] = list(neighbours)
        return self

    def vertices(self, rotations: dict[int, list[int]] | list[list[int]]) -> Self:
        items = rotations.items() if isinstance(rotations, dict) else enumerate(rotations)
        for v, nbrs in items:
            self.vertex(v, nbrs)
        return self

    @call_once
    def outer(self, w: int, n: int, e: int, s: int) -> Self:
        """Name the outer quadrangle, clockwise from W."""
        self.outer_labels = (w, n, e, s)
        return self

    @call_once()
    def root(self, tail: int, head: int) -> Self:
        """Mark the root dart."""
        self.root_dart = (tail, head)
        return self

    def build(self) -> PlanarMap | IrreducibleTriangulation:
        """Build a map, or a triangulation when outer labels were given."""
        assert self.rotations, "vertex is not called"
        system = RotationSystem.model_validate(
            {"rotations": self.rotations, "outer": self.outer_labels, "root": self.root_dart}
        )
        if system.outer is None:
            assert system.root is None, "root needs outer labels"
            return system.to_map()
        return system.to_triangulation()


