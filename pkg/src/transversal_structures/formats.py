"""Line-oriented text formats for maps, structures, trees and coordinates.

Map file::

    planarmap 5
    0: 3 4 1
    ...
    outer: 0 1 2 3
    root: 4 3
    structure
    3 4 red 4

The ``root:`` line and the ``structure`` section are optional. A structure
line names an inner edge, its color and its head; without the head the
section only carries a partition. ``#`` starts a comment.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from .builder import PlanarMapBuilder
from .colors import COLORS, Color
from .drawing import GridDrawing
from .errors import FormatError, MapError
from .planar_map import IrreducibleTriangulation, PlanarMap
from .ternary_tree import BicoloredTernaryTree, TernaryTree
from .transversal import EdgePartition, TransversalStructure

logger = logging.getLogger(__name__)

MAP_HEADER = "planarmap"
GRID_HEADER = "grid"
STRUCTURE_HEADER = "structure"


@dataclass(frozen=True)
class MapFile:
    """Parsed content of a map file."""

    map: PlanarMap
    triangulation: Optional[IrreducibleTriangulation] = None
    partition: Optional[EdgePartition] = None
    structure: Optional[TransversalStructure] = None


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", line) from None


def write_map(
    source: PlanarMap | IrreducibleTriangulation,
    structure: Optional[TransversalStructure | EdgePartition] = None,
) -> str:
    tri = source if isinstance(source, IrreducibleTriangulation) else None
    m = tri.map if tri is not None else source
    lines = [f"{MAP_HEADER} {m.vertex_count}"]
    for v, nbrs in enumerate(m.rotation_system()):
        lines.append(f"{v}: {' '.join(map(str, nbrs))}")
    if tri is not None:
        lines.append(f"outer: {' '.join(map(str, tri.outer_vertices))}")
        if tri.root_stem is not None:
            lines.append(f"root: {m.tail(tri.root_stem)} {m.head(tri.root_stem)}")
    if structure is not None:
        lines.append(STRUCTURE_HEADER)
        if isinstance(structure, TransversalStructure):
            for tail, head, color in structure.oriented_edges():
                lines.append(f"{tail} {head} {color} {head}")
        else:
            for e, color in enumerate(structure.colors):
                if color is not None:
                    lines.append(f"{m.tail(2 * e)} {m.head(2 * e)} {color}")
    return "\n".join(lines) + "\n"


def read_map(text: str) -> MapFile:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty map file")
    number, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != MAP_HEADER:
        raise FormatError(f"expected '{MAP_HEADER} <vertex_count>'", number)
    (count,) = _ints(parts[1:], number)

    builder = PlanarMapBuilder()
    outer = root = None
    structure_lines: list[tuple[int, list[str]]] = []
    in_structure = False
    for number, line in lines[1:]:
        if in_structure:
            structure_lines.append((number, line.split()))
            continue
        if line == STRUCTURE_HEADER:
            in_structure = True
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise FormatError(f"unexpected line {line!r}", number)
        key = key.strip()
        if key == "outer":
            outer = _ints(rest.split(), number)
            if len(outer) != 4:
                raise FormatError("outer needs four vertices W N E S", number)
        elif key == "root":
            root = _ints(rest.split(), number)
            if len(root) != 2:
                raise FormatError("root needs a tail and a head", number)
        else:
            (v,) = _ints([key], number)
            nbrs = _ints(rest.split(), number)
            if len(set(nbrs)) != len(nbrs):
                raise MapError("DUPLICATE_EDGE", f"vertex {v} repeats a neighbour (line {number})", location=number)
            if v in builder.rotations:
                raise FormatError(f"vertex {v} is listed twice", number)
            builder.vertex(v, nbrs)
    if sorted(builder.rotations) != list(range(count)):
        raise FormatError(f"expected rotation lines for vertices 0..{count - 1}")
    if root is not None and outer is None:
        raise FormatError("a root line needs an outer line")

    if outer is None:
        built = builder.build()
        if structure_lines:
            raise FormatError("a structure section needs an outer line", structure_lines[0][0])
        return MapFile(built)  # type: ignore[arg-type]
    builder.outer(*outer)
    if root is not None:
        builder.root(*root)
    tri = builder.build()
    assert isinstance(tri, IrreducibleTriangulation)
    if not structure_lines:
        return MapFile(tri.map, tri)
    return _read_structure(tri, structure_lines)


def _read_structure(tri: IrreducibleTriangulation, rows: list[tuple[int, list[str]]]) -> MapFile:
    m = tri.map
    colors: list[Optional[Color]] = [None] * m.edge_count
    direction = [-1] * m.edge_count
    oriented = None
    for number, tokens in rows:
        if len(tokens) not in (3, 4):
            raise FormatError("expected 'u v color [head]'", number)
        u, v = _ints(tokens[:2], number)
        color = tokens[2]
        if color not in COLORS:
            raise FormatError(f"unknown color {color!r}", number)
        if not m.has_edge(u, v):
            raise FormatError(f"{u}-{v} is not an edge", number)
        has_head = len(tokens) == 4
        if oriented is None:
            oriented = has_head
        elif oriented != has_head:
            raise FormatError("either every structure line names a head or none does", number)
        d = m.dart_between(u, v)
        colors[d >> 1] = color  # type: ignore[assignment]
        if has_head:
            (head,) = _ints(tokens[3:], number)
            if head not in (u, v):
                raise FormatError(f"head {head} is not an end of {u}-{v}", number)
            direction[d >> 1] = d if head == v else d ^ 1
    partition = EdgePartition.from_colors(tri, colors)
    structure = TransversalStructure(partition, tuple(direction)) if oriented else None
    return MapFile(tri.map, tri, partition, structure)


def write_tree(tree: BicoloredTernaryTree) -> str:
    return f"{tree.word} {tree.root_color}\n"


def read_tree(text: str) -> BicoloredTernaryTree:
    lines = _content_lines(text)
    if len(lines) != 1:
        raise FormatError(f"expected one tree line, got {len(lines)}")
    number, line = lines[0]
    tokens = line.split()
    if len(tokens) > 2:
        raise FormatError("expected '<word> [red|blue]'", number)
    color = tokens[1] if len(tokens) == 2 else "red"
    if color not in COLORS:
        raise FormatError(f"unknown color {color!r}", number)
    return BicoloredTernaryTree(TernaryTree.from_word(tokens[0]), color)  # type: ignore[arg-type]


def write_coordinates(drawing: GridDrawing) -> str:
    lines = [f"{GRID_HEADER} {drawing.width} {drawing.height}"]
    lines.extend(f"{v}\t{x}\t{y}" for v, (x, y) in enumerate(drawing.coords))
    return "\n".join(lines) + "\n"


def read_coordinates(text: str) -> GridDrawing:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty coordinate file")
    number, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != GRID_HEADER:
        raise FormatError(f"expected '{GRID_HEADER} <width> <height>'", number)
    width, height = _ints(parts[1:], number)
    coords: dict[int, tuple[int, int]] = {}
    for number, line in lines[1:]:
        values = _ints(line.split(), number)
        if len(values) != 3:
            raise FormatError("expected 'vertex x y'", number)
        v, x, y = values
        if v in coords:
            raise FormatError(f"vertex {v} is listed twice", number)
        coords[v] = (x, y)
    if sorted(coords) != list(range(len(coords))):
        raise FormatError("coordinate lines must cover vertices 0..V-1")
    return GridDrawing(tuple(coords[v] for v in range(len(coords))), width, height)
