"""Face-counting straight-line grid drawings of transversal structures.

The abscissa of a vertex is the number of inner faces of the red map left of
its separating red path; its ordinate is the number of inner faces of the blue
map right of its separating blue path.
"""

import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import networkx as nx
from pydantic import BaseModel, Field, field_validator

from .colors import BLUE, RED, Color
from .errors import Report
from .planar_map import IrreducibleTriangulation, PlanarMap
from .transversal import (
    BipolarMap,
    EdgePartition,
    TransversalStructure,
    blue_map,
    red_map,
)

logger = logging.getLogger(__name__)

# Pairwise segment checks run up to this many edges
PAIRWISE_LIMIT = 600

Point = tuple[int, int]


@dataclass(frozen=True)
class GridDrawing:
    """Integer coordinates of every vertex on a ``width`` x ``height`` grid."""

    coords: tuple[Point, ...]
    width: int
    height: int

    def x(self, v: int) -> int:
        return self.coords[v][0]

    def y(self, v: int) -> int:
        return self.coords[v][1]

    @property
    def half_perimeter(self) -> int:
        return self.width + self.height


@dataclass(frozen=True)
class FourAreas:
    """Inner faces of a bipolar map left, below, above and right of each vertex's paths."""

    left: tuple[int, ...]
    down: tuple[int, ...]
    up: tuple[int, ...]
    right: tuple[int, ...]

    def abscissa(self, v: int) -> int:
        return self.left[v] + self.down[v]


@dataclass(frozen=True)
class SeparatingPath:
    """Source-to-sink path of a bipolar map through ``through``."""

    color: Color
    through: int
    vertices: tuple[int, ...]
    darts: tuple[int, ...]

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)


def separating_path(bipolar: BipolarMap, v: int) -> SeparatingPath:
    """Rightmost ingoing path from the source to ``v``, then leftmost outgoing path to the sink."""
    m = bipolar.map
    below: list[int] = []
    u = v
    while u != bipolar.source:
        d = bipolar.rightmost_in(u)
        assert d is not None, f"vertex {u} has no ingoing edge"
        below.append(d ^ 1)
        u = m.head(d)
    darts = list(reversed(below))
    u = v
    while u != bipolar.sink:
        d = bipolar.leftmost_out(u)
        assert d is not None, f"vertex {u} has no outgoing edge"
        darts.append(d)
        u = m.head(d)
    vertices = [bipolar.source] + [m.head(d) for d in darts]
    return SeparatingPath(bipolar.color, v, tuple(vertices), tuple(darts))


def _left_boundary_darts(bipolar: BipolarMap) -> list[int]:
    a, b, c = bipolar.left_boundary
    return [bipolar.map.dart_between(a, b), bipolar.map.dart_between(b, c)]


def faces_left_of(bipolar: BipolarMap, path: SeparatingPath) -> int:
    """Inner faces between the left boundary and ``path``, by flooding the dual."""
    m = bipolar.map
    on_path = {d >> 1 for d in path.darts}
    seen: set[int] = set()
    queue: deque[int] = deque()
    for d in _left_boundary_darts(bipolar):
        f = m.face_right(d)
        if d >> 1 not in on_path and f not in seen:
            seen.add(f)
            queue.append(f)
    while queue:
        f = queue.popleft()
        for d in m.faces[f]:
            g = m.face_left(d)
            if d >> 1 in on_path or g == m.outer_face or g in seen:
                continue
            seen.add(g)
            queue.append(g)
    return len(seen)


def transversal_draw(tri: IrreducibleTriangulation, ts: TransversalStructure) -> GridDrawing:
    """Reference drawing: one path walk and one flood per vertex and color."""
    red, blue = red_map(tri, ts), blue_map(tri, ts)
    height = blue.inner_face_count
    coords = []
    for v in range(tri.map.vertex_count):
        x = faces_left_of(red, separating_path(red, v))
        y = height - faces_left_of(blue, separating_path(blue, v))
        coords.append((x, y))
    return GridDrawing(tuple(coords), red.inner_face_count, height)


def _dual_weights(bipolar: BipolarMap) -> list[int]:
    """Signed subtree sizes of a breadth-first dual tree rooted at the outer face.

    An edge of the tree gets the size of its child subtree, positive when the
    child lies left of the edge's direction; other edges get zero.
    """
    m = bipolar.map
    parent_edge = [-1] * m.face_count
    order = [m.outer_face]
    seen = {m.outer_face}
    queue = deque([m.outer_face])
    while queue:
        f = queue.popleft()
        for d in m.faces[f]:
            g = m.face_left(d)
            if g in seen:
                continue
            seen.add(g)
            parent_edge[g] = d >> 1
            order.append(g)
            queue.append(g)
    size = [1] * m.face_count
    weights = [0] * m.edge_count
    for g in reversed(order[1:]):
        e = parent_edge[g]
        d = bipolar.direction[e]
        weights[e] = size[g] if m.face_left(d) == g else -size[g]
        other = m.face_right(d) if m.face_left(d) == g else m.face_left(d)
        size[other] += size[g]
    return weights


def four_areas(bipolar: BipolarMap) -> FourAreas:
    """Face counts around every vertex's four extreme paths in linear time."""
    m = bipolar.map
    weights = _dual_weights(bipolar)
    offset = sum(weights[d >> 1] for d in _left_boundary_darts(bipolar))
    order = list(nx.topological_sort(bipolar.to_networkx()))
    count = m.vertex_count
    sums = {key: [0] * count for key in ("ri", "li", "lo", "ro")}
    for v in order:
        if v == bipolar.source:
            continue
        for key, pick in (("ri", bipolar.rightmost_in), ("li", bipolar.leftmost_in)):
            d = pick(v)
            sums[key][v] = sums[key][m.head(d)] + weights[d >> 1]
    for v in reversed(order):
        if v == bipolar.sink:
            continue
        for key, pick in (("lo", bipolar.leftmost_out), ("ro", bipolar.rightmost_out)):
            d = pick(v)
            sums[key][v] = sums[key][m.head(d)] + weights[d >> 1]
    total = bipolar.inner_face_count
    ri, li, lo, ro = sums["ri"], sums["li"], sums["lo"], sums["ro"]
    return FourAreas(
        left=tuple(li[v] + lo[v] - offset for v in range(count)),
        down=tuple(ri[v] - li[v] for v in range(count)),
        up=tuple(ro[v] - lo[v] for v in range(count)),
        right=tuple(total - (ri[v] + ro[v] - offset) for v in range(count)),
    )


def fast_coordinates(
    tri: IrreducibleTriangulation, ts: TransversalStructure
) -> tuple[GridDrawing, FourAreas, FourAreas]:
    """Same drawing as ``transversal_draw`` in linear time, with the red and blue areas."""
    red, blue = red_map(tri, ts), blue_map(tri, ts)
    red_areas, blue_areas = four_areas(red), four_areas(blue)
    height = blue.inner_face_count
    coords = tuple(
        (red_areas.abscissa(v), height - blue_areas.abscissa(v))
        for v in range(tri.map.vertex_count)
    )
    return GridDrawing(coords, red.inner_face_count, height), red_areas, blue_areas


def compact(drawing: GridDrawing) -> GridDrawing:
    """Remove every grid line that carries no vertex."""
    xs = {x: i for i, x in enumerate(sorted({x for x, _ in drawing.coords}))}
    ys = {y: i for i, y in enumerate(sorted({y for _, y in drawing.coords}))}
    coords = tuple((xs[x], ys[y]) for x, y in drawing.coords)
    return GridDrawing(coords, len(xs) - 1, len(ys) - 1)


def unused_coordinates(drawing: GridDrawing) -> tuple[list[int], list[int]]:
    xs = {x for x, _ in drawing.coords}
    ys = {y for _, y in drawing.coords}
    return (
        [x for x in range(drawing.width + 1) if x not in xs],
        [y for y in range(drawing.height + 1) if y not in ys],
    )


def ccw_internal_edges(tri: IrreducibleTriangulation, ep: EdgePartition, color: Color) -> int:
    """Inner edges of ``color`` between inner vertices whose counterclockwise
    successor at both ends has the same color."""
    m = tri.map
    count = 0
    for e in tri.inner_edges():
        if ep.color(e) != color:
            continue
        a, b = 2 * e, 2 * e + 1
        if tri.is_outer(m.tail(a)) or tri.is_outer(m.tail(b)):
            continue
        if ep.dart_color(m.next(a)) == color and ep.dart_color(m.next(b)) == color:
            count += 1
    return count


def _orient(a: Point, b: Point, c: Point) -> int:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Whether closed segments ab and cd meet, in exact integer arithmetic."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return (
        (o1 == 0 and _on_segment(a, b, c))
        or (o2 == 0 and _on_segment(a, b, d))
        or (o3 == 0 and _on_segment(c, d, a))
        or (o4 == 0 and _on_segment(c, d, b))
    )


def _doubled_area(points: list[Point]) -> int:
    return sum(
        points[i][0] * points[(i + 1) % len(points)][1]
        - points[(i + 1) % len(points)][0] * points[i][1]
        for i in range(len(points))
    )


def _check_segments(m: PlanarMap, coords: tuple[Point, ...], report: Report) -> None:
    edges = [(m.tail(2 * e), m.head(2 * e)) for e in range(m.edge_count)]
    for (u1, v1), (u2, v2) in combinations(edges, 2):
        shared = {u1, v1} & {u2, v2}
        if shared:
            (p,) = shared
            q1 = coords[v1 if p == u1 else u1]
            q2 = coords[v2 if p == u2 else u2]
            o = coords[p]
            same_ray = _orient(o, q1, q2) == 0 and (
                (q1[0] - o[0]) * (q2[0] - o[0]) + (q1[1] - o[1]) * (q2[1] - o[1]) > 0
            )
            if same_ray:
                report.add("OVERLAP", f"edges {u1}-{v1} and {u2}-{v2} overlap", location=(u1, v1, u2, v2))
        elif segments_intersect(coords[u1], coords[v1], coords[u2], coords[v2]):
            report.add("CROSSING", f"edges {u1}-{v1} and {u2}-{v2} cross", location=(u1, v1, u2, v2))


def verify_drawing(
    tri: IrreducibleTriangulation,
    drawing: GridDrawing,
    structure: Optional[TransversalStructure] = None,
) -> Report:
    """Check a drawing with exact integer predicates.

    Inner faces must be clockwise triangles whose areas add up to the outer
    quadrangle; small drawings also get a pairwise segment test. With a
    ``structure``, red edges must go up and weakly right, blue edges right
    and weakly down.
    """
    report = Report("drawing")
    m = tri.map
    coords = drawing.coords
    if len(coords) != m.vertex_count:
        report.add("OFF_GRID", f"{len(coords)} positions for {m.vertex_count} vertices")
        return report
    for v, (x, y) in enumerate(coords):
        if not (0 <= x <= drawing.width and 0 <= y <= drawing.height):
            report.add("OFF_GRID", f"vertex {v} at {(x, y)} is off the grid", location=v)
    owner: dict[Point, int] = {}
    for v, p in enumerate(coords):
        if p in owner:
            report.add("DUPLICATE_POSITION", f"vertices {owner[p]} and {v} share {p}", location=p)
        owner.setdefault(p, v)

    inner_total = 0
    for f in tri.inner_faces():
        area = _doubled_area([coords[v] for v in m.face_vertices(f)])
        if area >= 0:
            report.add("FACE_ORIENTATION", f"face {f} has doubled area {area}", location=f)
        inner_total -= area
    outer = [coords[v] for v in m.face_vertices(m.outer_face)]
    outer_area = _doubled_area(outer)
    if outer_area <= 0 or segments_intersect(outer[0], outer[1], outer[2], outer[3]) or (
        segments_intersect(outer[1], outer[2], outer[3], outer[0])
    ):
        report.add("OUTER_FACE", f"outer quadrangle {outer} is not a simple counterclockwise polygon")
    if inner_total != outer_area:
        report.add("AREA", f"inner faces cover {inner_total}, outer face encloses {outer_area}")

    if m.edge_count <= PAIRWISE_LIMIT:
        _check_segments(m, coords, report)

    if structure is not None:
        for tail, head, color in structure.oriented_edges():
            (x1, y1), (x2, y2) = coords[tail], coords[head]
            if color == RED and not (y2 > y1 and x2 >= x1):
                report.add("RED_DIRECTION", f"red edge {tail}->{head} goes {(x1, y1)} to {(x2, y2)}", location=(tail, head))
            if color == BLUE and not (x2 > x1 and y2 <= y1):
                report.add("BLUE_DIRECTION", f"blue edge {tail}->{head} goes {(x1, y1)} to {(x2, y2)}", location=(tail, head))
    if not report.ok:
        logger.debug("drawing check failed: %s", report.first)
    return report


# Default SVG output values
SVG_DEFAULTS = {
    "unit": 40,
    "margin": 20,
    "stroke_width": 2.0,
    "vertex_radius": 4.0,
    "red": "#d62728",
    "blue": "#1f77b4",
    "outer": "#000000",
}


class SvgStyle(BaseModel):
    """Rendering options for ``emit_svg``."""

    model_config = {"extra": "forbid"}

    unit: int = Field(default=SVG_DEFAULTS["unit"], description="Pixels per grid step")
    margin: int = Field(default=SVG_DEFAULTS["margin"], description="Blank border in pixels")
    stroke_width: float = Field(default=SVG_DEFAULTS["stroke_width"], description="Edge stroke width")
    vertex_radius: float = Field(default=SVG_DEFAULTS["vertex_radius"], description="Vertex dot radius")
    grid: bool = Field(default=False, description="Draw the grid lines")
    labels: bool = Field(default=False, description="Write vertex ids next to the dots")
    red: str = Field(default=SVG_DEFAULTS["red"], description="Stroke color of red edges")
    blue: str = Field(default=SVG_DEFAULTS["blue"], description="Stroke color of blue edges")
    outer: str = Field(default=SVG_DEFAULTS["outer"], description="Stroke color of outer edges")

    @field_validator("unit")
    @classmethod
    def validate_unit(cls, v: int) -> int:
        if v <= 0:
            raise ValueError(f"BAD_SIZE: unit must be positive, got {v}")
        return v

    @field_validator("margin")
    @classmethod
    def validate_margin(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"BAD_SIZE: margin must be non-negative, got {v}")
        return v


def emit_svg(
    tri: IrreducibleTriangulation,
    drawing: GridDrawing,
    style: Optional[SvgStyle] = None,
    structure: Optional[TransversalStructure] = None,
) -> str:
    """Render a drawing as SVG text; the y axis points up."""
    style = style or SvgStyle()
    m = tri.map
    unit, margin = style.unit, style.margin
    width = drawing.width * unit + 2 * margin
    height = drawing.height * unit + 2 * margin

    def px(v: int) -> tuple[int, int]:
        x, y = drawing.coords[v]
        return margin + x * unit, margin + (drawing.height - y) * unit

    lines = [
        "<?xml version='1.0'?>",
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}' "
        f"viewBox='0 0 {width} {height}'>",
        "<style>",
        f".red {{ stroke: {style.red}; }}",
        f".blue {{ stroke: {style.blue}; }}",
        f".outer {{ stroke: {style.outer}; }}",
        ".edge { stroke: #7f7f7f; }",
        ".grid { stroke: #dddddd; stroke-width: 1; }",
        "</style>",
    ]
    if style.grid:
        lines.append("<g class='grid'>")
        for i in range(drawing.width + 1):
            x = margin + i * unit
            lines.append(f"<line x1='{x}' y1='{margin}' x2='{x}' y2='{height - margin}'/>")
        for j in range(drawing.height + 1):
            y = margin + j * unit
            lines.append(f"<line x1='{margin}' y1='{y}' x2='{width - margin}' y2='{y}'/>")
        lines.append("</g>")

    lines.append(f"<g stroke-width='{style.stroke_width:g}' stroke-linecap='round'>")
    for e in range(m.edge_count):
        u, v = m.tail(2 * e), m.head(2 * e)
        if e in tri.outer_edges:
            cls = "outer"
        elif structure is not None:
            cls = structure.color(e) or "edge"
        else:
            cls = "edge"
        (x1, y1), (x2, y2) = px(u), px(v)
        lines.append(f"<line class='{cls}' x1='{x1}' y1='{y1}' x2='{x2}' y2='{y2}'/>")
    lines.append("</g>")

    lines.append("<g fill='black'>")
    for v in range(m.vertex_count):
        x, y = px(v)
        lines.append(f"<circle cx='{x}' cy='{y}' r='{style.vertex_radius:g}'/>")
        if style.labels:
            name = tri.label(v) or str(v)
            lines.append(f"<text x='{x}' y='{y}' dx='6' dy='-6' font-size='12'>{name}</text>")
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
