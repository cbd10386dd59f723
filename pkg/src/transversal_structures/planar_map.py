"""Combinatorial maps given by rotation systems.

Conventions used throughout the package:

* darts ``2k`` and ``2k + 1`` are the two orientations of edge ``k``, so the
  twin of ``d`` is ``d ^ 1``;
* ``next_around_vertex`` is the counterclockwise successor around the tail;
* the face of a dart is the face on its right, face cycles follow
  ``d -> next_around_vertex(twin(d))`` (inner faces run clockwise);
* the angle of a dart ``e`` sits at its tail, between the counterclockwise
  predecessor of ``e`` and ``e``, inside the face of ``e``.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence

import networkx as nx

from .errors import MapError

logger = logging.getLogger(__name__)

OUTER_LABELS = ("W", "N", "E", "S")


@dataclass(frozen=True, slots=True)
class Dart:
    """One orientation of an edge, seen from its tail vertex."""

    id: int
    vertex: int
    next_around_vertex: int
    twin: int


@dataclass(frozen=True, eq=False)
class PlanarMap:
    """An embedded connected plane graph stored as flat dart arrays."""

    vertex_count: int
    outer_face: int
    tails: tuple[int, ...] = field(repr=False)
    next_ccw: tuple[int, ...] = field(repr=False)
    prev_ccw: tuple[int, ...] = field(repr=False)
    first_dart: tuple[int, ...] = field(repr=False)
    face_of: tuple[int, ...] = field(repr=False)
    faces: tuple[tuple[int, ...], ...] = field(repr=False)
    dart_index: Mapping[tuple[int, int], int] = field(repr=False)

    @cached_property
    def darts(self) -> tuple[Dart, ...]:
        return tuple(
            Dart(d, self.tails[d], self.next_ccw[d], d ^ 1)
            for d in range(len(self.tails))
        )

    @property
    def dart_count(self) -> int:
        return len(self.tails)

    @property
    def edge_count(self) -> int:
        return len(self.tails) // 2

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @staticmethod
    def twin(d: int) -> int:
        return d ^ 1

    @staticmethod
    def edge(d: int) -> int:
        return d >> 1

    def tail(self, d: int) -> int:
        return self.tails[d]

    def head(self, d: int) -> int:
        return self.tails[d ^ 1]

    def next(self, d: int) -> int:
        """Counterclockwise successor of ``d`` around its tail."""
        return self.next_ccw[d]

    def prev(self, d: int) -> int:
        """Clockwise successor of ``d`` around its tail."""
        return self.prev_ccw[d]

    def face_right(self, d: int) -> int:
        return self.face_of[d]

    def face_left(self, d: int) -> int:
        return self.face_of[d ^ 1]

    def face_next(self, d: int) -> int:
        """The dart following ``d`` along the face on its right."""
        return self.next_ccw[d ^ 1]

    def face_vertices(self, f: int) -> tuple[int, ...]:
        return tuple(self.tails[d] for d in self.faces[f])

    def rotation(self, v: int) -> tuple[int, ...]:
        """Darts leaving ``v`` in counterclockwise order."""
        first = self.first_dart[v]
        if first < 0:
            return ()
        out = [first]
        d = self.next_ccw[first]
        while d != first:
            out.append(d)
            d = self.next_ccw[d]
        return tuple(out)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return tuple(self.tails[d ^ 1] for d in self.rotation(v))

    def degree(self, v: int) -> int:
        return len(self.rotation(v))

    def dart_between(self, u: int, v: int) -> int:
        """The dart from ``u`` to ``v``; raises ``KeyError`` if they are not adjacent."""
        return self.dart_index[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.dart_index

    def edges(self) -> Iterator[int]:
        """One representative dart per edge."""
        return iter(range(0, len(self.tails), 2))

    def rotation_system(self) -> list[list[int]]:
        return [list(self.neighbours(v)) for v in range(self.vertex_count)]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(
            (self.tails[d], self.tails[d + 1]) for d in range(0, len(self.tails), 2)
        )
        return graph

    def cycle_interior(self, cycle: Sequence[int]) -> tuple[frozenset[int], bool]:
        """Faces enclosed by a simple closed dart path, and whether they lie on its right.

        Both sides are flooded in lock step through the dual without crossing
        the cycle; the side that reaches the outer face is the exterior.
        """
        blocked = {d >> 1 for d in cycle}
        starts = (self.face_of[cycle[0]], self.face_of[cycle[0] ^ 1])
        seen = [{starts[0]}, {starts[1]}]
        queues = [deque([starts[0]]), deque([starts[1]])]
        alive = [starts[0] != self.outer_face, starts[1] != self.outer_face]
        while True:
            for side in (0, 1):
                if not alive[side]:
                    continue
                if not queues[side]:
                    return frozenset(seen[side]), side == 0
                f = queues[side].popleft()
                for d in self.faces[f]:
                    if d >> 1 in blocked:
                        continue
                    g = self.face_of[d ^ 1]
                    if g == self.outer_face:
                        alive[side] = False
                        break
                    if g not in seen[side]:
                        seen[side].add(g)
                        queues[side].append(g)
            if not any(alive):
                raise MapError("BAD_OUTER_HINT", "cycle does not separate the outer face")


def _as_rotation_lists(
    rotation_system: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
) -> list[list[int]]:
    if isinstance(rotation_system, Mapping):
        keys = sorted(rotation_system)
        if keys != list(range(len(keys))):
            raise MapError(
                "BAD_VERTEX_IDS", f"expected vertices 0..{len(keys) - 1}, got {keys}"
            )
        return [list(rotation_system[v]) for v in keys]
    return [list(nbrs) for nbrs in rotation_system]


def _find_outer_face(
    faces: Sequence[Sequence[int]],
    tails: Sequence[int],
    hint: Optional[Sequence[int]],
) -> int:
    if hint is None:
        return max(range(len(faces)), key=lambda f: (len(faces[f]), -f))
    hint = list(hint)
    for f, cycle in enumerate(faces):
        if len(cycle) != len(hint):
            continue
        # the hint is clockwise, face cycles of the outer face run counterclockwise
        seq = [tails[d] for d in reversed(cycle)]
        for i, v in enumerate(seq):
            if v == hint[0] and seq[i:] + seq[:i] == hint:
                return f
    raise MapError("BAD_OUTER_HINT", f"{hint} is not a clockwise face cycle", location=hint)


def build_map(
    rotation_system: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
    outer_face_hint: Optional[Sequence[int]] = None,
) -> PlanarMap:
    """Build a validated map from per-vertex counterclockwise neighbour lists.

    Without a hint the largest face (lowest id on ties) becomes the outer face.
    """
    rotations = _as_rotation_lists(rotation_system)
    vertex_count = len(rotations)
    if vertex_count == 0:
        raise MapError("BAD_VERTEX_IDS", "a map needs at least one vertex")
    neighbour_sets = [set(nbrs) for nbrs in rotations]

    dart_index: dict[tuple[int, int], int] = {}
    tails: list[int] = []
    for v, nbrs in enumerate(rotations):
        if len(neighbour_sets[v]) != len(nbrs):
            dup = next(u for u in nbrs if nbrs.count(u) > 1)
            raise MapError(
                "DUPLICATE_EDGE", f"vertex {v} lists neighbour {dup} twice", location=(v, dup)
            )
        for u in nbrs:
            if u == v:
                raise MapError("SELF_LOOP", f"vertex {v} lists itself", location=v)
            if not 0 <= u < vertex_count or v not in neighbour_sets[u]:
                raise MapError(
                    "MISSING_TWIN",
                    f"edge {v}-{u} is missing from the rotation of {u}",
                    location=(v, u),
                )
            if (v, u) in dart_index:
                continue
            dart_index[(v, u)] = len(tails)
            dart_index[(u, v)] = len(tails) + 1
            tails.extend((v, u))

    dart_count = len(tails)
    next_ccw = [0] * dart_count
    prev_ccw = [0] * dart_count
    first_dart = [-1] * vertex_count
    for v, nbrs in enumerate(rotations):
        ds = [dart_index[(v, u)] for u in nbrs]
        for i, d in enumerate(ds):
            next_ccw[d] = ds[(i + 1) % len(ds)]
            prev_ccw[d] = ds[i - 1]
        if ds:
            first_dart[v] = ds[0]

    face_of = [-1] * dart_count
    faces: list[tuple[int, ...]] = []
    for d in range(dart_count):
        if face_of[d] >= 0:
            continue
        cycle = []
        e = d
        while face_of[e] < 0:
            face_of[e] = len(faces)
            cycle.append(e)
            e = next_ccw[e ^ 1]
        faces.append(tuple(cycle))
    if not faces:
        faces.append(())

    # each component adds its own outer face to the Euler sum
    graph = nx.Graph()
    graph.add_nodes_from(range(vertex_count))
    graph.add_edges_from((tails[d], tails[d + 1]) for d in range(0, dart_count, 2))
    if not nx.is_connected(graph):
        parts = nx.number_connected_components(graph)
        raise MapError("DISCONNECTED", f"graph has {parts} connected components")

    euler = vertex_count - dart_count // 2 + len(faces)
    if euler != 2:
        raise MapError(
            "NON_PLANAR_ROTATION",
            f"V - E + F = {vertex_count} - {dart_count // 2} + {len(faces)} = {euler}",
        )

    outer_face = _find_outer_face(faces, tails, outer_face_hint)
    logger.debug(
        "built map: %d vertices, %d edges, %d faces", vertex_count, dart_count // 2, len(faces)
    )
    return PlanarMap(
        vertex_count=vertex_count,
        outer_face=outer_face,
        tails=tuple(tails),
        next_ccw=tuple(next_ccw),
        prev_ccw=tuple(prev_ccw),
        first_dart=tuple(first_dart),
        face_of=tuple(face_of),
        faces=tuple(faces),
        dart_index=dart_index,
    )


@dataclass(frozen=True, eq=False)
class IrreducibleTriangulation:
    """A validated map with quadrangular outer face (W, N, E, S clockwise).

    ``root_stem`` optionally marks the dart that carried the root leaf of the
    ternary tree the triangulation was closed from.
    """

    map: PlanarMap
    outer_vertices: tuple[int, int, int, int]
    root_stem: Optional[int] = None

    @property
    def W(self) -> int:
        return self.outer_vertices[0]

    @property
    def N(self) -> int:
        return self.outer_vertices[1]

    @property
    def E(self) -> int:
        return self.outer_vertices[2]

    @property
    def S(self) -> int:
        return self.outer_vertices[3]

    @property
    def n(self) -> int:
        """Number of inner vertices."""
        return self.map.vertex_count - 4

    @cached_property
    def _outer_set(self) -> frozenset[int]:
        return frozenset(self.outer_vertices)

    @cached_property
    def outer_edges(self) -> frozenset[int]:
        return frozenset(d >> 1 for d in self.map.faces[self.map.outer_face])

    def is_outer(self, v: int) -> bool:
        return v in self._outer_set

    def label(self, v: int) -> Optional[str]:
        for name, w in zip(OUTER_LABELS, self.outer_vertices):
            if w == v:
                return name
        return None

    def inner_vertices(self) -> list[int]:
        return [v for v in range(self.map.vertex_count) if v not in self._outer_set]

    def is_inner_edge(self, e: int) -> bool:
        return e not in self.outer_edges

    def inner_edges(self) -> list[int]:
        return [e for e in range(self.map.edge_count) if e not in self.outer_edges]

    def inner_faces(self) -> list[int]:
        return [f for f in range(self.map.face_count) if f != self.map.outer_face]

    @cached_property
    def angular(self) -> "AngularGraph":
        """The angular graph, built once per triangulation."""
        return angular_graph(self)

    def outer_dart(self, a: int, b: int) -> int:
        """Dart from ``a`` to ``b`` along the outer quadrangle."""
        return self.map.dart_between(a, b)


def validate_irreducible(
    planar_map: PlanarMap,
    labels: Sequence[int] | Mapping[str, int],
    root_stem: Optional[int] = None,
) -> IrreducibleTriangulation:
    """Wrap ``planar_map`` as an irreducible triangulation or raise ``MapError``."""
    if isinstance(labels, Mapping):
        labels = [labels[name] for name in OUTER_LABELS]
    labels = tuple(int(v) for v in labels)
    m = planar_map

    outer_cycle = m.faces[m.outer_face]
    outer_seq = [m.tail(d) for d in reversed(outer_cycle)]
    if len(outer_cycle) != 4 or len(set(outer_seq)) != 4:
        raise MapError(
            "NOT_QUAD_OUTER", f"outer face has boundary {outer_seq}", location=m.outer_face
        )
    if len(labels) != 4 or set(labels) != set(outer_seq):
        raise MapError("BAD_LABEL_ORDER", f"labels {labels} do not name the outer face {outer_seq}")
    i = outer_seq.index(labels[0])
    if tuple(outer_seq[i:] + outer_seq[:i]) != labels:
        raise MapError(
            "BAD_LABEL_ORDER", f"W, N, E, S = {labels} is not clockwise around {outer_seq}"
        )

    triangles: set[frozenset[int]] = set()
    for f, cycle in enumerate(m.faces):
        if f == m.outer_face:
            continue
        corners = frozenset(m.tail(d) for d in cycle)
        if len(cycle) != 3 or len(corners) != 3:
            raise MapError(
                "NON_TRIANGULAR_INNER_FACE",
                f"face {f} has boundary {[m.tail(d) for d in cycle]}",
                location=f,
            )
        triangles.add(corners)

    adjacency = [set(m.neighbours(v)) for v in range(m.vertex_count)]
    for u in range(m.vertex_count):
        for v in adjacency[u]:
            if v <= u:
                continue
            for w in adjacency[u] & adjacency[v]:
                if w > v and frozenset((u, v, w)) not in triangles:
                    raise MapError(
                        "SEPARATING_TRIANGLE",
                        f"3-cycle ({u}, {v}, {w}) is not a face",
                        location=(u, v, w),
                    )

    if root_stem is not None and not 0 <= root_stem < m.dart_count:
        raise MapError("BAD_VERTEX_IDS", f"root dart {root_stem} does not exist")

    if m.vertex_count < 5:
        raise MapError("BAD_SIZE", "an irreducible triangulation needs an inner vertex")
    tri = IrreducibleTriangulation(m, labels, root_stem)
    assert len(tri.inner_edges()) == 3 * tri.n + 1
    assert len(tri.inner_faces()) == 2 * tri.n + 2
    return tri


def rotate_labels(tri: IrreducibleTriangulation, quarter_turns: int) -> IrreducibleTriangulation:
    """Shift the W, N, E, S labels clockwise by ``quarter_turns`` positions.

    One quarter turn makes the old S the new W. The root marker is dropped
    unless the labels are unchanged.
    """
    k = quarter_turns % 4
    if k == 0:
        return tri
    old = tri.outer_vertices
    new = tuple(old[(i - k) % 4] for i in range(4))
    return IrreducibleTriangulation(tri.map, new)


def canonical_form(tri: IrreducibleTriangulation, with_root: bool = False) -> tuple:
    """Relabel vertices breadth first from the W->N dart.

    Two labeled triangulations are isomorphic iff their canonical forms are
    equal. ``with_root`` appends the relabeled root dart.
    """
    m = tri.map
    start = m.dart_between(tri.W, tri.N)
    label = {tri.W: 0}
    order = [(tri.W, start)]
    rows = []
    i = 0
    while i < len(order):
        v, first = order[i]
        i += 1
        row = []
        d = first
        while True:
            u = m.head(d)
            if u not in label:
                label[u] = len(label)
                order.append((u, d ^ 1))
            row.append(label[u])
            d = m.next(d)
            if d == first:
                break
        rows.append(tuple(row))
    form = (tuple(rows), tuple(label[v] for v in tri.outer_vertices))
    if with_root:
        root = tri.root_stem
        marker = None if root is None else (label[m.tail(root)], label[m.head(root)])
        return form + (marker,)
    return form


def unlabeled_canonical_form(tri: IrreducibleTriangulation) -> tuple:
    """Canonical form up to rotation of the outer labels."""
    return min(canonical_form(rotate_labels(tri, k)) for k in range(4))


@dataclass(frozen=True, eq=False)
class AngularGraph:
    """Angular graph of a triangulation.

    Black vertices keep the ids of the triangulation's vertices; white vertex
    ``black_count + i`` stands for inner face ``white_faces[i]``. Edge ``k`` of
    ``map`` (dart ``2k`` runs black to white) is the angle ``angle_of_edge[k]``.
    """

    map: PlanarMap
    triangulation: IrreducibleTriangulation
    black_count: int
    white_faces: tuple[int, ...]
    angle_of_edge: tuple[int, ...]

    @cached_property
    def edge_of_angle(self) -> dict[int, int]:
        return {angle: k for k, angle in enumerate(self.angle_of_edge)}

    def is_black(self, v: int) -> bool:
        return v < self.black_count


def angular_graph(tri: IrreducibleTriangulation) -> AngularGraph:
    """Build Q(T): one edge per (vertex, inner face) incidence."""
    m = tri.map
    inner_faces = tri.inner_faces()
    white_of = {f: m.vertex_count + i for i, f in enumerate(inner_faces)}
    rotations: list[list[int]] = []
    angle_at: dict[tuple[int, int], int] = {}
    for v in range(m.vertex_count):
        rot = []
        for e in m.rotation(v):
            f = m.face_right(e)
            if f == m.outer_face:
                continue
            rot.append(white_of[f])
            angle_at[(v, white_of[f])] = e
        rotations.append(rot)
    for f in inner_faces:
        rotations.append([m.tail(d) for d in reversed(m.faces[f])])

    hint = []
    for a, b in zip(tri.outer_vertices, tri.outer_vertices[1:] + tri.outer_vertices[:1]):
        hint.extend((a, white_of[m.face_right(m.dart_between(a, b))]))
    q = build_map(rotations, hint)
    angle_of_edge = tuple(
        angle_at[(q.tail(d), q.head(d))] for d in range(0, q.dart_count, 2)
    )
    return AngularGraph(q, tri, m.vertex_count, tuple(inner_faces), angle_of_edge)
