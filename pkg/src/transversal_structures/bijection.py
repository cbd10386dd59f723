"""Closure of bicolored ternary trees into triangulations, and the inverse opening.

A tree with ``n`` nodes has ``4n`` half-edges, half-edge ``4i + slot`` sitting
at node ``i`` in slot ``slot`` (parent, left, middle, right counterclockwise).
Half-edges without a twin are stems. The outer walk visits the half-edges
along the outer face: a stem is followed by the next half-edge around its
node, a closed-edge side by the next half-edge around the node it leads to.
"""

import copy
import logging
from dataclasses import dataclass
from typing import Optional

import networkx as nx
import numpy as np

from .colors import RED, Color
from .errors import Report, StructureError
from .planar_map import IrreducibleTriangulation, build_map, validate_irreducible
from .ternary_tree import (
    LEAF,
    NODE,
    RIGHT,
    BicoloredTernaryTree,
    TernaryTree,
    random_bicolored,
)
from .transversal import (
    EdgePartition,
    find_alpha0,
    find_right_alternating_cycles,
    minimalize,
    rotate_structure,
    sweep_preimage,
)

logger = logging.getLogger(__name__)

# Labels given to the four intervals, in walk order starting from S
INTERVAL_LABELS = ("S", "E", "N", "W")


@dataclass
class PartialFigure:
    """A tree being closed, with its outer walk kept as a linked list."""

    tree: BicoloredTernaryTree
    node_of: list[int]
    sigma: list[int]
    twin: list[int]
    color: list[Color]
    walk_next: list[int]
    walk_prev: list[int]
    on_walk: list[bool]
    position: list[int]
    closures: int = 0

    @classmethod
    def from_tree(cls, tree: BicoloredTernaryTree) -> "PartialFigure":
        n = tree.n
        size = 4 * n
        sigma = [4 * (h // 4) + (h % 4 + 1) % 4 for h in range(size)]
        twin = [-1] * size
        for v in range(n):
            for at in range(1, RIGHT + 1):
                c = tree.tree.child(v, at)
                if c >= 0:
                    twin[4 * v + at] = 4 * c
                    twin[4 * c] = 4 * v + at
        order = []
        h = 0
        for _ in range(size):
            order.append(h)
            h = sigma[h] if twin[h] < 0 else sigma[twin[h]]
        assert h == 0 and len(set(order)) == size, "outer walk does not cover the tree"
        walk_next = [0] * size
        walk_prev = [0] * size
        position = [0] * size
        for i, h in enumerate(order):
            walk_next[h] = order[(i + 1) % size]
            walk_prev[order[(i + 1) % size]] = h
            position[h] = i
        return cls(
            tree=tree,
            node_of=[h // 4 for h in range(size)],
            sigma=sigma,
            twin=twin,
            color=[tree.color(h // 4, h % 4) for h in range(size)],
            walk_next=walk_next,
            walk_prev=walk_prev,
            on_walk=[True] * size,
            position=position,
        )

    def is_stem(self, h: int) -> bool:
        return self.twin[h] < 0

    @property
    def anchor(self) -> int:
        """The surviving walk item that came first on the original walk."""
        return min(
            (h for h in range(len(self.on_walk)) if self.on_walk[h]), key=lambda h: self.position[h]
        )

    def walk(self) -> list[int]:
        start = self.anchor
        items = [start]
        h = self.walk_next[start]
        while h != start:
            items.append(h)
            h = self.walk_next[h]
        return items

    def stem_count(self) -> int:
        return sum(1 for h in self.walk() if self.is_stem(h))

    def edge_side_count(self) -> int:
        return sum(1 for h in self.walk() if not self.is_stem(h))

    def can_close(self, s: int) -> bool:
        """Whether stem ``s`` is followed on the walk by two closed-edge sides."""
        if s >= len(self.on_walk) or not self.on_walk[s] or not self.is_stem(s):
            return False
        e1 = self.walk_next[s]
        e2 = self.walk_next[e1]
        return s not in (e1, e2) and not self.is_stem(e1) and not self.is_stem(e2)

    def close(self, s: int) -> None:
        """Attach stem ``s`` to the end of the second edge side following it."""
        e1 = self.walk_next[s]
        e2 = self.walk_next[e1]
        t2 = self.twin[e2]
        h = len(self.node_of)
        self.node_of.append(self.node_of[t2])
        self.sigma.append(self.sigma[t2])
        self.sigma[t2] = h
        self.twin.append(s)
        self.twin[s] = h
        self.color.append(self.color[s])
        q = self.walk_next[e2]
        self.walk_next[s] = q
        self.walk_prev[q] = s
        self.on_walk[e1] = self.on_walk[e2] = False
        self.closures += 1

    def check_invariants(self) -> Report:
        """Outer angles are bicolored and stems outnumber edge sides by four."""
        report = Report("partial figure")
        for h in self.walk():
            if self.color[h] == self.color[self.walk_next[h]]:
                report.add(
                    "BICOLORED",
                    f"outer angle between half-edges {h} and {self.walk_next[h]} is unicolored",
                    location=h,
                )
        balance = self.stem_count() - self.edge_side_count()
        if balance != 4:
            report.add("STEM_BALANCE", f"stems minus edge sides is {balance}, expected 4")
        return report

    def intervals(self) -> list[list[int]]:
        """Walk items split between consecutive stems, starting after the anchor's boundary."""
        items = self.walk()
        size = len(items)
        cuts = [
            (i + 1) % size
            for i in range(size)
            if self.is_stem(items[i]) and self.is_stem(items[(i + 1) % size])
        ]
        if not cuts:
            return [items]
        cuts.sort()
        pieces = []
        for k, start in enumerate(cuts):
            end = cuts[(k + 1) % len(cuts)]
            piece = []
            i = start
            while True:
                piece.append(items[i])
                i = (i + 1) % size
                if i == end:
                    break
            pieces.append(piece)
        return pieces

    def signature(self) -> tuple:
        """Rotation of every node, stems named by id; equal for equal figures."""
        rows = []
        for v in range(self.tree.n):
            row = []
            h = 4 * v
            while True:
                row.append(("s", h) if self.is_stem(h) else ("n", self.node_of[self.twin[h]]))
                h = self.sigma[h]
                if h == 4 * v:
                    break
            rows.append(tuple(row))
        return tuple(rows)


def local_closure(fig: PartialFigure, stem: Optional[int] = None) -> Optional[PartialFigure]:
    """Close one triangle, at ``stem`` or at the first stem of the walk that allows it.

    Returns a new figure, or ``None`` when no local closure applies.
    """
    candidates = [stem] if stem is not None else fig.walk()
    for s in candidates:
        if fig.can_close(s):
            out = copy.deepcopy(fig)
            out.close(s)
            return out
    return None


def partial_closure(
    fig: PartialFigure, rng: Optional[np.random.Generator] = None
) -> PartialFigure:
    """Apply local closures until none is possible.

    Stems wait on a stack; after a closure the two walk items before the
    closed stem are checked again. ``rng`` shuffles the initial stack.
    """
    out = copy.deepcopy(fig)
    pending = [h for h in out.walk() if out.is_stem(h)]
    if rng is not None:
        pending = [pending[i] for i in rng.permutation(len(pending))]
    while pending:
        s = pending.pop()
        if not out.can_close(s):
            continue
        out.close(s)
        p = out.walk_prev[s]
        pending.append(out.walk_prev[p])
        pending.append(p)
    logger.debug("partial closure: %d local closures on %d nodes", out.closures, out.tree.n)
    return out


def complete_closure(fig: PartialFigure) -> tuple[IrreducibleTriangulation, EdgePartition]:
    """Add the outer quadrangle and connect every remaining stem to it."""
    n = fig.tree.n
    pieces = fig.intervals()
    assert len(pieces) == 4, f"expected 4 stem intervals, got {len(pieces)}"
    first_red = next(h for h in fig.walk() if fig.is_stem(h) and fig.color[h] == RED)
    s_index = next(i for i, piece in enumerate(pieces) if first_red in piece)
    outer_id = {"W": n, "N": n + 1, "E": n + 2, "S": n + 3}

    target: dict[int, int] = {}
    stem_nodes: dict[str, list[int]] = {}
    for k, label in enumerate(INTERVAL_LABELS):
        piece = pieces[(s_index + k) % 4]
        stems = [h for h in piece if fig.is_stem(h)]
        for h in stems:
            target[h] = outer_id[label]
        stem_nodes[label] = [fig.node_of[h] for h in stems]

    def token(h: int) -> int:
        return target[h] if fig.is_stem(h) else fig.node_of[fig.twin[h]]

    rotations: list[list[int]] = []
    for v in range(n):
        row = []
        h = 4 * v
        while True:
            row.append(token(h))
            h = fig.sigma[h]
            if h == 4 * v:
                break
        rotations.append(row)
    W, N, E, S = (outer_id[x] for x in ("W", "N", "E", "S"))
    rotations.append([S, *reversed(stem_nodes["W"]), N])
    rotations.append([W, *reversed(stem_nodes["N"]), E])
    rotations.append([N, *reversed(stem_nodes["E"]), S])
    rotations.append([E, *reversed(stem_nodes["S"]), W])

    planar_map = build_map(rotations, [W, N, E, S])
    root = planar_map.dart_between(0, token(0))
    tri = validate_irreducible(planar_map, (W, N, E, S), root)
    colors: list[Optional[Color]] = [None] * planar_map.edge_count
    for h in range(len(fig.node_of)):
        if fig.node_of[h] < n:
            colors[planar_map.dart_between(fig.node_of[h], token(h)) >> 1] = fig.color[h]
    logger.debug("complete closure: %d vertices, root dart %d", planar_map.vertex_count, root)
    return tri, EdgePartition.from_colors(tri, colors)


def closure(tree: BicoloredTernaryTree) -> tuple[IrreducibleTriangulation, EdgePartition]:
    """The rooted triangulation of a bicolored tree, with its minimal partition."""
    return complete_closure(partial_closure(PartialFigure.from_tree(tree)))


@dataclass(frozen=True)
class FourOrientation:
    """Half-edge orientation read from the angles of a minimal partition.

    ``outward[d]`` holds for the darts leaving an inner vertex through a
    bicolored angle. ``kinds[e]`` is ``"tree"`` when both halves of edge ``e``
    are outward, ``"stem"`` when one is, ``None`` on the outer edges.
    """

    triangulation: IrreducibleTriangulation
    outward: tuple[bool, ...]
    kinds: tuple[Optional[str], ...]

    def outdegree(self, v: int) -> int:
        return sum(1 for d in self.triangulation.map.rotation(v) if self.outward[d])

    def tree_edges(self) -> list[int]:
        return [e for e, kind in enumerate(self.kinds) if kind == "tree"]

    def stem_edges(self) -> list[int]:
        return [e for e, kind in enumerate(self.kinds) if kind == "stem"]

    def to_networkx(self) -> nx.DiGraph:
        """Outward halves as arcs; tree edges give an arc each way."""
        m = self.triangulation.map
        graph = nx.DiGraph()
        graph.add_nodes_from(self.triangulation.inner_vertices())
        graph.add_edges_from(
            (m.tail(d), m.head(d)) for d in range(m.dart_count) if self.outward[d]
        )
        return graph


def four_orientation(tri: IrreducibleTriangulation, ep: EdgePartition) -> FourOrientation:
    """Orient half-edges out of their vertex iff their angle is bicolored."""
    right = find_right_alternating_cycles(tri, ep)
    if right:
        raise StructureError(
            "NOT_MINIMAL",
            f"{len(right)} right alternating 4-cycles, first {right[0].vertices}",
            location=right[0].vertices,
        )
    m = tri.map
    outward = [
        not tri.is_outer(m.tail(d)) and ep.dart_color(m.prev(d)) != ep.dart_color(d)
        for d in range(m.dart_count)
    ]
    kinds: list[Optional[str]] = [None] * m.edge_count
    for e in tri.inner_edges():
        halves = outward[2 * e] + outward[2 * e + 1]
        if halves == 0:
            raise StructureError(
                "NOT_MINIMAL",
                f"edge {m.tail(2 * e)}-{m.head(2 * e)} is ingoing at both ends",
                location=e,
            )
        kinds[e] = "tree" if halves == 2 else "stem"

    tree_graph = nx.Graph()
    tree_graph.add_nodes_from(tri.inner_vertices())
    tree_graph.add_edges_from((m.tail(2 * e), m.head(2 * e)) for e, k in enumerate(kinds) if k == "tree")
    if not nx.is_tree(tree_graph):
        raise StructureError("NOT_MINIMAL", "tree edges do not span the inner vertices")
    return FourOrientation(tri, tuple(outward), tuple(kinds))


def has_clockwise_circuit(tri: IrreducibleTriangulation, orientation: FourOrientation) -> bool:
    """Search every directed circuit of length three or more; small instances only."""
    m = tri.map
    for cycle in nx.simple_cycles(orientation.to_networkx()):
        if len(cycle) < 3:
            continue
        darts = [m.dart_between(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
        _, on_right = m.cycle_interior(darts)
        if on_right:
            logger.debug("clockwise circuit %s", cycle)
            return True
    return False


def minimal_partition(tri: IrreducibleTriangulation) -> EdgePartition:
    """The minimal transversal edge-partition of ``tri``."""
    ts = sweep_preimage(tri, find_alpha0(tri))
    return minimalize(tri, ts.partition)


def _kept_darts(orientation: FourOrientation, d: int) -> list[int]:
    m = orientation.triangulation.map
    kept = []
    x = d
    while True:
        if orientation.outward[x]:
            kept.append(x)
        x = m.next(x)
        if x == d:
            return kept


def opening(
    tri: IrreducibleTriangulation, ep: Optional[EdgePartition] = None
) -> BicoloredTernaryTree:
    """Recover the bicolored tree by removing every half-edge with a unicolored angle.

    The tree is rooted at the marked root dart when there is one, otherwise
    at the dart towards S from the inner neighbour of S following E.
    """
    if ep is None:
        ep = minimal_partition(tri)
    orientation = four_orientation(tri, ep)
    m = tri.map
    if tri.root_stem is not None:
        root = tri.root_stem
    else:
        x1 = m.head(m.next(m.dart_between(tri.S, tri.E)))
        root = m.dart_between(x1, tri.S)
    if not orientation.outward[root] or orientation.kinds[root >> 1] != "stem":
        raise StructureError("NOT_MINIMAL", f"root dart {root} is not a stem", location=root)

    word = []
    stack = [root]
    while stack:
        d = stack.pop()
        if d < 0:
            word.append(LEAF)
            continue
        word.append(NODE)
        slots = _kept_darts(orientation, d)
        if len(slots) != 4:
            raise StructureError(
                "NOT_MINIMAL", f"vertex {m.tail(d)} has outdegree {len(slots)}", location=m.tail(d)
            )
        children = [x ^ 1 if orientation.kinds[x >> 1] == "tree" else -1 for x in slots[1:]]
        stack.extend(reversed(children))
    color = ep.dart_color(root)
    assert color is not None
    return BicoloredTernaryTree(TernaryTree("".join(word)), color)


def generate(
    n: int, seed: int | np.random.SeedSequence
) -> tuple[IrreducibleTriangulation, EdgePartition]:
    """Uniform random triangulation with ``n`` inner vertices and its minimal partition.

    A uniform tree and root color are closed, then the labels get a uniform
    half-turn; the root marker does not survive the turn.
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    tree_seed, turn_seed = ss.spawn(2)
    tri, ep = closure(random_bicolored(n, tree_seed))
    turns = 2 * int(np.random.Generator(np.random.PCG64(turn_seed)).integers(2))
    return rotate_structure(tri, ep, turns)
