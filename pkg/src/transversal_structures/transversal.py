"""Transversal structures, transversal edge-partitions and alpha0-orientations.

Colors live on edges, indexed by edge id; the four outer edges carry ``None``.
A structure adds one oriented dart per inner edge. Dart types read from the
tail: ``OR`` outgoing red, ``IB`` ingoing blue, and so on.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator, Literal, Mapping, Optional, Sequence

import networkx as nx

from .colors import BLUE, COLORS, RED, Color, other
from .errors import MapError, Report, StructureError
from .planar_map import (
    OUTER_LABELS,
    AngularGraph,
    IrreducibleTriangulation,
    PlanarMap,
    build_map,
    rotate_labels,
)

logger = logging.getLogger(__name__)

DartType = Literal["OR", "OB", "IR", "IB"]
Chirality = Literal["left", "right"]

# Counterclockwise order of the four intervals around an inner vertex
TYPE_ORDER: tuple[DartType, ...] = ("OR", "IB", "IR", "OB")

# Type of every inner edge at an outer vertex, seen from that vertex
POLE_TYPES: dict[str, DartType] = {"W": "OB", "N": "IR", "E": "IB", "S": "OR"}

# Largest inner-vertex count accepted by the brute-force oracles
ORACLE_CAP = 4


@dataclass(frozen=True)
class EdgePartition:
    """A red/blue coloring of the inner edges of a triangulation."""

    triangulation: IrreducibleTriangulation = field(repr=False)
    colors: tuple[Optional[Color], ...]

    def color(self, e: int) -> Optional[Color]:
        return self.colors[e]

    def dart_color(self, d: int) -> Optional[Color]:
        return self.colors[d >> 1]

    def angle_color(self, d: int) -> Color:
        """Color of ``d`` with the outer edges counted as blue."""
        c = self.colors[d >> 1]
        return BLUE if c is None else c

    def edges_of(self, color: Color) -> list[int]:
        return [e for e, c in enumerate(self.colors) if c == color]

    def with_colors(self, updates: Mapping[int, Color]) -> "EdgePartition":
        colors = list(self.colors)
        for e, c in updates.items():
            colors[e] = c
        return EdgePartition(self.triangulation, tuple(colors))

    def swapped(self) -> "EdgePartition":
        return EdgePartition(
            self.triangulation, tuple(None if c is None else other(c) for c in self.colors)
        )

    @classmethod
    def from_colors(
        cls,
        tri: IrreducibleTriangulation,
        colors: Mapping[tuple[int, int], Color] | Sequence[Optional[Color]],
    ) -> "EdgePartition":
        """Build from ``{(u, v): color}`` or from a per-edge list."""
        m = tri.map
        if isinstance(colors, Mapping):
            values: list[Optional[Color]] = [None] * m.edge_count
            for (u, v), c in colors.items():
                if not m.has_edge(u, v):
                    raise MapError("BAD_VERTEX_IDS", f"{u}-{v} is not an edge", location=(u, v))
                values[m.dart_between(u, v) >> 1] = c
        else:
            values = list(colors)
            if len(values) != m.edge_count:
                raise MapError(
                    "BAD_VERTEX_IDS", f"expected {m.edge_count} edge colors, got {len(values)}"
                )
        for e in tri.outer_edges:
            values[e] = None
        return cls(tri, tuple(values))


@dataclass(frozen=True)
class TransversalStructure:
    """An edge-partition together with an orientation of every inner edge.

    ``direction[e]`` is the dart of edge ``e`` that points from its tail to its
    head, ``-1`` on the outer edges.
    """

    partition: EdgePartition
    direction: tuple[int, ...]

    @property
    def triangulation(self) -> IrreducibleTriangulation:
        return self.partition.triangulation

    def color(self, e: int) -> Optional[Color]:
        return self.partition.colors[e]

    def is_outgoing(self, d: int) -> bool:
        return self.direction[d >> 1] == d

    def dart_type(self, d: int) -> Optional[DartType]:
        c = self.partition.colors[d >> 1]
        if c is None:
            return None
        return ("O" if self.is_outgoing(d) else "I") + ("R" if c == RED else "B")  # type: ignore[return-value]

    def oriented_edges(self) -> Iterator[tuple[int, int, Color]]:
        """``(tail, head, color)`` of every inner edge."""
        m = self.triangulation.map
        for e, d in enumerate(self.direction):
            if d >= 0:
                yield m.tail(d), m.head(d), self.partition.colors[e]  # type: ignore[misc]

    @classmethod
    def from_oriented(
        cls, tri: IrreducibleTriangulation, edges: Iterable[tuple[int, int, Color]]
    ) -> "TransversalStructure":
        m = tri.map
        colors: list[Optional[Color]] = [None] * m.edge_count
        direction = [-1] * m.edge_count
        for tail, head, c in edges:
            if not m.has_edge(tail, head):
                raise MapError(
                    "BAD_VERTEX_IDS", f"{tail}->{head} is not an edge", location=(tail, head)
                )
            d = m.dart_between(tail, head)
            colors[d >> 1] = c
            direction[d >> 1] = d
        return cls(EdgePartition(tri, tuple(colors)), tuple(direction))


def _pole_color(name: str) -> Color:
    return RED if name in ("N", "S") else BLUE


def verify_partition(tri: IrreducibleTriangulation, ep: EdgePartition) -> Report:
    """Check the coloring and the alternation conditions at inner and outer vertices."""
    report = Report("partition")
    m = tri.map
    if len(ep.colors) != m.edge_count:
        report.add("COLORS", f"{len(ep.colors)} colors for {m.edge_count} edges")
        return report
    for e, c in enumerate(ep.colors):
        ends = (m.tail(2 * e), m.head(2 * e))
        if e in tri.outer_edges:
            if c is not None:
                report.add("COLORS", f"outer edge {ends[0]}-{ends[1]} is colored", location=ends)
        elif c not in COLORS:
            report.add("COLORS", f"inner edge {ends[0]}-{ends[1]} is uncolored", location=ends)
    if not report.ok:
        return report

    for name, v in zip(OUTER_LABELS, tri.outer_vertices):
        want = _pole_color(name)
        for d in m.rotation(v):
            c = ep.dart_color(d)
            if c is not None and c != want:
                report.add(
                    "C2", f"edge {v}-{m.head(d)} at {name} is {c}, expected {want}", location=(v, m.head(d))
                )

    for v in tri.inner_vertices():
        seq = [ep.dart_color(d) for d in m.rotation(v)]
        changes = sum(1 for i in range(len(seq)) if seq[i] != seq[i - 1])
        if changes != 4:
            report.add(
                "C1", f"vertex {v} has {changes} color changes around it, expected 4", location=v
            )
    return report


def require_partition(tri: IrreducibleTriangulation, ep: EdgePartition) -> None:
    """Raise ``INVALID_PARTITION`` naming the first condition ``ep`` breaks."""
    report = verify_partition(tri, ep)
    if not report.ok:
        first = report.first
        assert first is not None
        raise StructureError("INVALID_PARTITION", str(first), location=first.location)


def _runs(items: Sequence) -> list:
    """Cyclic runs of equal consecutive items, each given by its value."""
    k = len(items)
    start = next((i for i in range(k) if items[i] != items[i - 1]), None)
    if start is None:
        return [items[0]] if items else []
    runs = []
    for i in range(k):
        x = items[(start + i) % k]
        if not runs or runs[-1] != x:
            runs.append(x)
    return runs


def _is_type_cycle(runs: list) -> bool:
    if len(runs) != 4 or runs[0] not in TYPE_ORDER:
        return False
    k = TYPE_ORDER.index(runs[0])
    return runs == [TYPE_ORDER[(k + i) % 4] for i in range(4)]


def verify_structure(tri: IrreducibleTriangulation, ts: TransversalStructure) -> Report:
    """Check C1'/C2', acyclicity and the poles of a structure.

    Partition violations are reported first; the orientation checks run only
    on a valid partition.
    """
    report = Report("structure")
    report.extend(verify_partition(tri, ts.partition))
    if not report.ok:
        return report
    m = tri.map

    for e in tri.inner_edges():
        if ts.direction[e] not in (2 * e, 2 * e + 1):
            report.add("DIRECTION", f"inner edge {e} has no direction", location=e)
    if not report.ok:
        return report

    for name, v in zip(OUTER_LABELS, tri.outer_vertices):
        for d in m.rotation(v):
            t = ts.dart_type(d)
            if t is not None and t != POLE_TYPES[name]:
                report.add(
                    "C2'",
                    f"edge {v}-{m.head(d)} at {name} is {t}, expected {POLE_TYPES[name]}",
                    location=(v, m.head(d)),
                )

    for v in tri.inner_vertices():
        runs = _runs([ts.dart_type(d) for d in m.rotation(v)])
        if not _is_type_cycle(runs):
            report.add("C1'", f"vertex {v} reads {runs} counterclockwise", location=v)

    graph = nx.DiGraph()
    graph.add_nodes_from(range(m.vertex_count))
    graph.add_edges_from((tail, head) for tail, head, _ in ts.oriented_edges())
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _ in nx.find_cycle(graph)]
        report.add("ACYCLIC", f"directed cycle through {cycle}", location=tuple(cycle))
    sources = {v for v in graph if graph.in_degree(v) == 0}
    sinks = {v for v in graph if graph.out_degree(v) == 0}
    if sources != {tri.W, tri.S} or sinks != {tri.N, tri.E}:
        report.add(
            "POLES", f"sources {sorted(sources)} and sinks {sorted(sinks)}", location=(tri.W, tri.S)
        )
    return report


def phi(ts: TransversalStructure) -> EdgePartition:
    """Forget the orientation."""
    return ts.partition


@dataclass(frozen=True)
class Alpha0Orientation:
    """Orientation of the angular graph: ``out_of_black[k]`` tells whether edge ``k``
    leaves its black end."""

    angular: AngularGraph = field(compare=False, repr=False)
    out_of_black: tuple[bool, ...]

    def tail(self, k: int) -> int:
        return self.angular.map.tail(2 * k if self.out_of_black[k] else 2 * k + 1)

    def outdegrees(self) -> list[int]:
        degrees = [0] * self.angular.map.vertex_count
        for k in range(len(self.out_of_black)):
            degrees[self.tail(k)] += 1
        return degrees

    def outdegree(self, v: int) -> int:
        return self.outdegrees()[v]

    def is_valid(self) -> bool:
        return self.outdegrees() == alpha0_targets(self.angular)

    def is_ingoing_angle(self, e: int) -> bool:
        """Whether the angle of dart ``e`` of the triangulation points into its black end."""
        m = self.angular.triangulation.map
        if m.face_right(e) == m.outer_face:
            return False
        return not self.out_of_black[self.angular.edge_of_angle[e]]


def alpha0_targets(angular: AngularGraph) -> list[int]:
    """Prescribed outdegree of every vertex of the angular graph."""
    tri = angular.triangulation
    targets = []
    for v in range(angular.map.vertex_count):
        if not angular.is_black(v):
            targets.append(1)
        elif not tri.is_outer(v):
            targets.append(4)
        else:
            targets.append(2 if tri.label(v) in ("N", "S") else 0)
    return targets


def psi(tri: IrreducibleTriangulation, ep: EdgePartition) -> Alpha0Orientation:
    """Orient each angle out of its black vertex iff the angle is bicolored.

    The four outer edges count as blue.
    """
    m = tri.map
    ang = tri.angular
    out = tuple(ep.angle_color(m.prev(e)) != ep.angle_color(e) for e in ang.angle_of_edge)
    return Alpha0Orientation(ang, out)


def find_alpha0(angular: AngularGraph | IrreducibleTriangulation) -> Alpha0Orientation:
    """Any alpha0-orientation, read off an integral maximum flow.

    Every edge of the angular graph sends one unit to the endpoint it leaves;
    vertex capacities are the prescribed outdegrees.
    """
    if isinstance(angular, IrreducibleTriangulation):
        angular = angular.angular
    q = angular.map
    targets = alpha0_targets(angular)
    network = nx.DiGraph()
    for k in range(q.edge_count):
        network.add_edge("s", ("e", k), capacity=1)
        network.add_edge(("e", k), ("v", q.tail(2 * k)), capacity=1)
        network.add_edge(("e", k), ("v", q.tail(2 * k + 1)), capacity=1)
    for v, target in enumerate(targets):
        network.add_edge(("v", v), "t", capacity=target)
    value, flow = nx.maximum_flow(network, "s", "t")
    if value < q.edge_count:
        raise StructureError(
            "NO_ORIENTATION", f"flow reaches {value} of {q.edge_count} angular edges"
        )
    out = tuple(flow[("e", k)][("v", q.tail(2 * k))] == 1 for k in range(q.edge_count))
    logger.debug("alpha0-orientation found on %d angular edges", q.edge_count)
    return Alpha0Orientation(angular, out)


def sweep_preimage(
    tri: IrreducibleTriangulation, orientation: Alpha0Orientation
) -> TransversalStructure:
    """The unique structure whose angle orientation is ``orientation``.

    A path from W to E starts just below N and is pushed down to (W, S, E).
    Each step takes the leftmost admissible pair (v, v') on the path: v has an
    ingoing lower-right angle, v' an ingoing lower-left angle, and no vertex
    strictly between them has either. The edges hanging below the vertices in
    between become red ingoing, the path edges from v to v' become blue.
    """
    m = tri.map
    colors: list[Optional[Color]] = [None] * m.edge_count
    direction = [-1] * m.edge_count
    ingoing = orientation.is_ingoing_angle

    path = [tri.W]
    d = m.next(m.dart_between(tri.N, tri.W))
    while m.head(d) != tri.E:
        path.append(m.head(d))
        colors[d >> 1] = RED
        direction[d >> 1] = d ^ 1
        d = m.next(d)
    path.append(tri.E)

    def left_in(i: int) -> bool:
        return i > 0 and ingoing(m.next(m.dart_between(path[i], path[i - 1])))

    def right_in(i: int) -> bool:
        return i < len(path) - 1 and ingoing(m.dart_between(path[i], path[i + 1]))

    final = [tri.W, tri.S, tri.E]
    limit = m.edge_count + 1
    steps = 0
    while path != final:
        steps += 1
        if steps > limit:
            raise StructureError("STUCK", f"no progress after {limit} steps", location=tuple(path))
        pair = None
        c = None
        for j in range(len(path)):
            if c is not None and left_in(j):
                pair = (c, j)
                break
            if right_in(j):
                c = j
        if pair is None or pair[1] - pair[0] < 2:
            raise StructureError("STUCK", f"no admissible pair on {path}", location=tuple(path))
        c, j = pair

        segment = [path[c]]
        for i in range(c + 1, j):
            w = path[i]
            d_next = m.dart_between(w, path[i + 1])
            d = m.next(m.dart_between(w, path[i - 1]))
            if d == d_next:
                raise StructureError("STUCK", f"vertex {w} has nothing below it", location=w)
            while d != d_next:
                colors[d >> 1] = RED
                direction[d >> 1] = d ^ 1
                if segment[-1] != m.head(d):
                    segment.append(m.head(d))
                d = m.next(d)
        for i in range(c, j):
            d = m.dart_between(path[i], path[i + 1])
            if d >> 1 in tri.outer_edges:
                continue
            colors[d >> 1] = BLUE
            direction[d >> 1] = d
        segment.append(path[j])
        logger.debug("sweep step %d: %s replaced by %s", steps, path[c : j + 1], segment)
        path = path[:c] + segment + path[j + 1 :]

    missing = [e for e in tri.inner_edges() if colors[e] is None]
    if missing:
        raise StructureError("STUCK", f"edges {missing} were never reached", location=tuple(missing))
    return TransversalStructure(EdgePartition(tri, tuple(colors)), tuple(direction))


def orient_partition(tri: IrreducibleTriangulation, ep: EdgePartition) -> TransversalStructure:
    return sweep_preimage(tri, psi(tri, ep))


def propagate_directions(tri: IrreducibleTriangulation, ep: EdgePartition) -> TransversalStructure:
    """Orient a partition vertex by vertex in linear time.

    Edges at the outer vertices are fixed by their pole; at an inner vertex one
    known edge fixes which of the four color runs is which.
    """
    m = tri.map
    direction = [-1] * m.edge_count
    queue: deque[int] = deque()
    seen: set[int] = set()
    for name, v in zip(OUTER_LABELS, tri.outer_vertices):
        outgoing = POLE_TYPES[name][0] == "O"
        for d in m.rotation(v):
            if d >> 1 in tri.outer_edges:
                continue
            direction[d >> 1] = d if outgoing else d ^ 1
            if m.head(d) not in seen:
                seen.add(m.head(d))
                queue.append(m.head(d))

    while queue:
        v = queue.popleft()
        rot = m.rotation(v)
        colors = [ep.dart_color(d) for d in rot]
        starts = [i for i in range(len(rot)) if colors[i] != colors[i - 1]]
        if len(starts) != 4 or None in colors:
            raise StructureError(
                "NO_ORIENTATION", f"vertex {v} has {len(starts)} color runs", location=v
            )
        run = [0] * len(rot)
        for r in range(4):
            i = starts[r]
            while i != starts[(r + 1) % 4]:
                run[i] = r
                i = (i + 1) % len(rot)
        known = next(i for i, d in enumerate(rot) if direction[d >> 1] >= 0)
        d = rot[known]
        known_type = ("O" if direction[d >> 1] == d else "I") + ("R" if colors[known] == RED else "B")
        offset = TYPE_ORDER.index(known_type) - run[known]
        for i, d in enumerate(rot):
            t = TYPE_ORDER[(run[i] + offset) % 4]
            if (t[1] == "R") != (colors[i] == RED):
                raise StructureError(
                    "NO_ORIENTATION", f"color runs at vertex {v} are out of order", location=v
                )
            want = d if t[0] == "O" else d ^ 1
            if direction[d >> 1] >= 0 and direction[d >> 1] != want:
                raise StructureError(
                    "NO_ORIENTATION", f"edge {v}-{m.head(d)} is oriented both ways", location=(v, m.head(d))
                )
            direction[d >> 1] = want
            u = m.head(d)
            if u not in seen and not tri.is_outer(u):
                seen.add(u)
                queue.append(u)
    return TransversalStructure(ep, tuple(direction))


@dataclass(frozen=True)
class AlternatingFourCycle:
    """A 4-cycle whose edge colors alternate.

    ``vertices`` run clockwise; ``edges[i]`` joins ``vertices[i]`` and
    ``vertices[i + 1]``.
    """

    vertices: tuple[int, int, int, int]
    edges: tuple[int, int, int, int]
    chirality: Chirality
    interior: frozenset[int] = field(compare=False, repr=False)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))

    def interior_edges(self, planar_map: PlanarMap) -> set[int]:
        inside = {d >> 1 for f in self.interior for d in planar_map.faces[f]}
        return inside - set(self.edges)


def _classify(
    tri: IrreducibleTriangulation, ep: EdgePartition, vertices: Sequence[int]
) -> Optional[AlternatingFourCycle]:
    m = tri.map
    verts = tuple(vertices)
    darts = [m.dart_between(verts[i], verts[(i + 1) % 4]) for i in range(4)]
    edge_colors = [ep.dart_color(d) for d in darts]
    if any(edge_colors[i] == edge_colors[i - 1] for i in range(4)):
        return None
    interior, on_right = m.cycle_interior(darts)
    if not on_right:
        verts = (verts[0], verts[3], verts[2], verts[1])
        darts = [m.dart_between(verts[i], verts[(i + 1) % 4]) for i in range(4)]

    matches = {"left": True, "right": True}
    for i, v in enumerate(verts):
        to_prev = m.dart_between(v, verts[i - 1])
        to_next = m.dart_between(v, verts[(i + 1) % 4])
        left_color, right_color = ep.dart_color(to_next), ep.dart_color(to_prev)
        d = m.next(to_prev)
        while d != to_next:
            c = ep.dart_color(d)
            matches["right"] &= c == right_color
            matches["left"] &= c == left_color
            d = m.next(d)
    if matches["right"] == matches["left"]:
        return None
    chirality: Chirality = "right" if matches["right"] else "left"
    return AlternatingFourCycle(
        verts, tuple(d >> 1 for d in darts), chirality, interior  # type: ignore[arg-type]
    )


def find_alternating_cycles(
    tri: IrreducibleTriangulation, ep: EdgePartition
) -> list[AlternatingFourCycle]:
    """All left and right alternating 4-cycles, ordered by their edge ids."""
    m = tri.map
    inner = set(tri.inner_vertices())
    nbrs = {v: [u for u in m.neighbours(v) if u in inner] for v in inner}
    nbr_sets = {v: set(us) for v, us in nbrs.items()}

    def color(u: int, v: int) -> Optional[Color]:
        return ep.dart_color(m.dart_between(u, v))

    seen: set[frozenset[int]] = set()
    found = []
    for a in sorted(inner):
        for b in nbrs[a]:
            for d in nbrs[a]:
                if b >= d or color(a, b) == color(a, d):
                    continue
                for c in nbr_sets[b] & nbr_sets[d]:
                    if c == a or color(b, c) != color(a, d) or color(c, d) != color(a, b):
                        continue
                    edges = frozenset(
                        m.dart_between(x, y) >> 1 for x, y in ((a, b), (b, c), (c, d), (d, a))
                    )
                    if edges in seen:
                        continue
                    seen.add(edges)
                    cycle = _classify(tri, ep, (a, b, c, d))
                    if cycle is None:
                        logger.debug("alternating 4-cycle %s is neither left nor right", (a, b, c, d))
                        continue
                    found.append(cycle)
    return sorted(found, key=lambda cyc: cyc.key)


def find_right_alternating_cycles(
    tri: IrreducibleTriangulation, ep: EdgePartition
) -> list[AlternatingFourCycle]:
    return [c for c in find_alternating_cycles(tri, ep) if c.chirality == "right"]


def _switch(tri: IrreducibleTriangulation, ep: EdgePartition, cycle: AlternatingFourCycle) -> EdgePartition:
    inside = cycle.interior_edges(tri.map)
    return ep.with_colors({e: other(ep.colors[e]) for e in inside})  # type: ignore[arg-type]


def flip(tri: IrreducibleTriangulation, ep: EdgePartition, cycle: AlternatingFourCycle) -> EdgePartition:
    """Switch the colors inside a right alternating 4-cycle, making it left."""
    current = _classify(tri, ep, cycle.vertices)
    if current is None or current.chirality != "right":
        raise StructureError(
            "NOT_RIGHT_CYCLE", f"{cycle.vertices} is not a right alternating 4-cycle", location=cycle.vertices
        )
    logger.debug("flip %s", current.vertices)
    return _switch(tri, ep, current)


def flop(tri: IrreducibleTriangulation, ep: EdgePartition, cycle: AlternatingFourCycle) -> EdgePartition:
    """Inverse of ``flip``: make a left alternating 4-cycle right."""
    current = _classify(tri, ep, cycle.vertices)
    if current is None or current.chirality != "left":
        raise StructureError(
            "NOT_LEFT_CYCLE", f"{cycle.vertices} is not a left alternating 4-cycle", location=cycle.vertices
        )
    logger.debug("flop %s", current.vertices)
    return _switch(tri, ep, current)


def minimalize(
    tri: IrreducibleTriangulation,
    ep: EdgePartition,
    chooser: Optional[Callable[[list[AlternatingFourCycle]], AlternatingFourCycle]] = None,
) -> EdgePartition:
    """Flip right alternating 4-cycles until none is left.

    By default the cycle with the lowest edge ids goes first; ``chooser`` picks
    among the current right cycles instead.
    """
    flips = 0
    while True:
        right = find_right_alternating_cycles(tri, ep)
        if not right:
            logger.debug("minimal after %d flips", flips)
            return ep
        ep = flip(tri, ep, chooser(right) if chooser else right[0])
        flips += 1


def rotate_structure(
    tri: IrreducibleTriangulation, ep: EdgePartition, quarter_turns: int
) -> tuple[IrreducibleTriangulation, EdgePartition]:
    """Rotate the outer labels; odd quarter turns swap the two colors."""
    rotated = rotate_labels(tri, quarter_turns)
    colors = ep.colors if quarter_turns % 2 == 0 else ep.swapped().colors
    return rotated, EdgePartition(rotated, colors)


def _check_oracle_size(tri: IrreducibleTriangulation, cap: int) -> None:
    if tri.n > cap:
        raise StructureError("CAP_EXCEEDED", f"n={tri.n} is above the oracle cap {cap}")


def enumerate_partitions(
    tri: IrreducibleTriangulation, cap: int = ORACLE_CAP
) -> list[EdgePartition]:
    """Every transversal edge-partition, by brute force over the free edges."""
    _check_oracle_size(tri, cap)
    m = tri.map
    base: list[Optional[Color]] = [None] * m.edge_count
    for name, v in zip(OUTER_LABELS, tri.outer_vertices):
        for d in m.rotation(v):
            if d >> 1 not in tri.outer_edges:
                base[d >> 1] = _pole_color(name)
    free = [e for e in tri.inner_edges() if base[e] is None]
    found = []
    for choice in product(COLORS, repeat=len(free)):
        colors = list(base)
        for e, c in zip(free, choice):
            colors[e] = c
        ep = EdgePartition(tri, tuple(colors))
        if verify_partition(tri, ep).ok:
            found.append(ep)
    logger.debug("%d partitions over %d free edges", len(found), len(free))
    return found


def enumerate_alpha0(
    tri: IrreducibleTriangulation, cap: int = ORACLE_CAP
) -> list[Alpha0Orientation]:
    """Every alpha0-orientation of the angular graph.

    Each white vertex points along exactly one of its edges, so the search
    picks that edge face by face and tracks how many whites each black vertex
    may still receive.
    """
    _check_oracle_size(tri, cap)
    ang = tri.angular
    q = ang.map
    targets = alpha0_targets(ang)
    room = [q.degree(b) - targets[b] for b in range(ang.black_count)]
    whites = list(range(ang.black_count, q.vertex_count))
    picked = [-1] * len(whites)
    found: list[Alpha0Orientation] = []

    def extend(i: int) -> None:
        if i == len(whites):
            if not any(room):
                out = [True] * q.edge_count
                for k in picked:
                    out[k] = False
                found.append(Alpha0Orientation(ang, tuple(out)))
            return
        for d in q.rotation(whites[i]):
            b = q.head(d)
            if room[b] == 0:
                continue
            room[b] -= 1
            picked[i] = d >> 1
            extend(i + 1)
            room[b] += 1

    extend(0)
    return found


def enumerate_structures(
    tri: IrreducibleTriangulation, cap: int = ORACLE_CAP
) -> list[TransversalStructure]:
    """Every transversal structure, reached by flops upward from the minimal one."""
    _check_oracle_size(tri, cap)
    start = minimalize(tri, sweep_preimage(tri, find_alpha0(tri)).partition)
    seen = {start.colors: start}
    queue = deque([start])
    while queue:
        ep = queue.popleft()
        for cycle in find_alternating_cycles(tri, ep):
            if cycle.chirality != "left":
                continue
            up = flop(tri, ep, cycle)
            if up.colors not in seen:
                seen[up.colors] = up
                queue.append(up)
    logger.debug("%d structures in the flip lattice", len(seen))
    return [propagate_directions(tri, ep) for ep in seen.values()]


@dataclass(frozen=True)
class EssentialCircuit:
    """A clockwise directed circuit of an alpha0-orientation with no chordal path.

    ``vertices`` and ``darts`` follow the circuit in the angular map;
    ``interior`` holds the angular faces it encloses.
    """

    vertices: tuple[int, ...]
    darts: tuple[int, ...]
    interior: frozenset[int] = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.darts)

    def four_cycle_vertices(self, angular: AngularGraph) -> frozenset[int]:
        """Vertices of the triangulation 4-cycle switched by reversing this circuit.

        A face circuit stands for the quadrangle around one edge; a longer one
        goes through the four vertices themselves.
        """
        blacks = {v for v in self.vertices if angular.is_black(v)}
        if len(self) == 4:
            m = angular.triangulation.map
            for w in self.vertices:
                if not angular.is_black(w):
                    blacks.update(m.face_vertices(angular.white_faces[w - angular.black_count]))
        return frozenset(blacks)


def _has_chordal_path(q: PlanarMap, graph: nx.DiGraph, cycle: Sequence[int], interior: frozenset[int]) -> bool:
    on_cycle = set(cycle)

    def inside(u: int, v: int) -> bool:
        d = graph.edges[u, v]["dart"]
        return q.face_of[d] in interior and q.face_of[d ^ 1] in interior

    for start in cycle:
        stack = [start]
        seen = {start}
        while stack:
            u = stack.pop()
            for v in graph.successors(u):
                if not inside(u, v):
                    continue
                if v in on_cycle:
                    return True
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return False


def find_essential_circuits(
    orientation: Alpha0Orientation, cap: int = ORACLE_CAP
) -> list[EssentialCircuit]:
    """Clockwise circuits of ``orientation`` without a chordal path.

    Lists every directed circuit, so it is capped like the other oracles.
    """
    ang = orientation.angular
    _check_oracle_size(ang.triangulation, cap)
    q = ang.map
    graph = nx.DiGraph()
    for k in range(q.edge_count):
        d = 2 * k if orientation.out_of_black[k] else 2 * k + 1
        graph.add_edge(q.tail(d), q.head(d), dart=d)
    found = []
    for cycle in nx.simple_cycles(graph):
        darts = [graph.edges[u, v]["dart"] for u, v in zip(cycle, cycle[1:] + cycle[:1])]
        interior, on_right = q.cycle_interior(darts)
        if not on_right or _has_chordal_path(q, graph, cycle, interior):
            continue
        found.append(EssentialCircuit(tuple(cycle), tuple(darts), interior))
    return sorted(found, key=lambda c: sorted(c.darts))


@dataclass(frozen=True, eq=False)
class BipolarMap:
    """The plane bipolar orientation formed by one color and the outer quadrangle.

    ``direction[e]`` is the oriented dart of edge ``e``; ``left_boundary``
    lists the outer vertices from source to sink along the left side.
    """

    color: Color
    map: PlanarMap
    source: int
    sink: int
    left_boundary: tuple[int, int, int]
    direction: tuple[int, ...] = field(repr=False)

    def is_out(self, d: int) -> bool:
        return self.direction[d >> 1] == d

    @property
    def inner_face_count(self) -> int:
        return self.map.face_count - 1

    def _outer_angle(self, d: int) -> bool:
        return self.map.face_right(d) == self.map.outer_face

    def leftmost_out(self, v: int) -> Optional[int]:
        m = self.map
        for d in m.rotation(v):
            if self.is_out(d) and (not self.is_out(m.next(d)) or self._outer_angle(m.next(d))):
                return d
        return None

    def rightmost_out(self, v: int) -> Optional[int]:
        m = self.map
        for d in m.rotation(v):
            if self.is_out(d) and (not self.is_out(m.prev(d)) or self._outer_angle(d)):
                return d
        return None

    def leftmost_in(self, v: int) -> Optional[int]:
        """The dart at ``v`` whose edge is the leftmost one entering ``v``."""
        m = self.map
        for d in m.rotation(v):
            if not self.is_out(d) and (self.is_out(m.prev(d)) or self._outer_angle(d)):
                return d
        return None

    def rightmost_in(self, v: int) -> Optional[int]:
        m = self.map
        for d in m.rotation(v):
            if not self.is_out(d) and (self.is_out(m.next(d)) or self._outer_angle(m.next(d))):
                return d
        return None

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.map.vertex_count))
        graph.add_edges_from((self.map.tail(d), self.map.head(d)) for d in self.direction)
        return graph

    def is_bipolar(self) -> bool:
        graph = self.to_networkx()
        sources = [v for v in graph if graph.in_degree(v) == 0]
        sinks = [v for v in graph if graph.out_degree(v) == 0]
        return (
            nx.is_directed_acyclic_graph(graph)
            and sources == [self.source]
            and sinks == [self.sink]
        )


def _bipolar_map(
    tri: IrreducibleTriangulation,
    ts: TransversalStructure,
    color: Color,
    outer_directions: set[tuple[int, int]],
    poles: tuple[int, int],
    left_boundary: tuple[int, int, int],
) -> BipolarMap:
    m = tri.map

    def keep(d: int) -> bool:
        return d >> 1 in tri.outer_edges or ts.color(d >> 1) == color

    rotations = [[m.head(d) for d in m.rotation(v) if keep(d)] for v in range(m.vertex_count)]
    sub = build_map(rotations, list(tri.outer_vertices))
    direction = []
    for e in range(sub.edge_count):
        u, v = sub.tail(2 * e), sub.head(2 * e)
        d = m.dart_between(u, v)
        if d >> 1 in tri.outer_edges:
            forward = (u, v) in outer_directions
        else:
            forward = ts.direction[d >> 1] == d
        direction.append(2 * e if forward else 2 * e + 1)
    return BipolarMap(color, sub, poles[0], poles[1], left_boundary, tuple(direction))


def red_map(tri: IrreducibleTriangulation, ts: TransversalStructure) -> BipolarMap:
    """Red edges plus the outer quadrangle, oriented from S to N."""
    W, N, E, S = tri.outer_vertices
    return _bipolar_map(tri, ts, RED, {(S, W), (W, N), (S, E), (E, N)}, (S, N), (S, W, N))


def blue_map(tri: IrreducibleTriangulation, ts: TransversalStructure) -> BipolarMap:
    """Blue edges plus the outer quadrangle, oriented from W to E."""
    W, N, E, S = tri.outer_vertices
    return _bipolar_map(tri, ts, BLUE, {(W, N), (N, E), (W, S), (S, E)}, (W, E), (W, N, E))
