"""Rooted ternary trees and their alternating edge-bicoloration.

A tree with ``n`` nodes is written as a prefix word over ``N`` (node) and
``L`` (leaf) of length ``3n + 1``: the root node first, then the left, middle
and right subtrees. The root leaf carrying the tree is implicit.
"""

import logging
from dataclasses import dataclass
from functools import cache, cached_property
from math import comb
from typing import Iterator

import numpy as np

from .colors import BLUE, RED, Color, other
from .errors import TreeError

logger = logging.getLogger(__name__)

# Largest size accepted by the exhaustive enumerator
ENUMERATION_CAP = 8

NODE = "N"
LEAF = "L"

# Slot order counterclockwise around a node
PARENT, LEFT, MIDDLE, RIGHT = 0, 1, 2, 3
SLOT_NAMES = ("parent", "left", "middle", "right")


def count_ternary(n: int) -> int:
    """Number of rooted ternary trees with ``n`` nodes."""
    if n < 0:
        raise TreeError("BAD_SIZE", f"n must be non-negative, got {n}")
    return comb(3 * n, n) // (2 * n + 1)


def _check_word(word: str) -> None:
    if not word or set(word) - {NODE, LEAF}:
        raise TreeError("BAD_TREE_WORD", f"{word!r} is not a word over N and L")
    need = 1
    for i, letter in enumerate(word):
        if need == 0:
            raise TreeError("BAD_TREE_WORD", f"{word!r} has trailing letters at {i}", location=i)
        need += 2 if letter == NODE else -1
    if need != 0:
        raise TreeError("BAD_TREE_WORD", f"{word!r} misses {need} subtrees")


@dataclass(frozen=True)
class TernaryTree:
    """A rooted ternary tree.

    Nodes are numbered in prefix order. ``children[i]`` holds the left, middle
    and right child of node ``i``, ``-1`` standing for a leaf.
    """

    word: str

    def __post_init__(self):
        _check_word(self.word)

    @classmethod
    def from_word(cls, word: str) -> "TernaryTree":
        return cls(word.strip())

    @property
    def n(self) -> int:
        return self.word.count(NODE)

    @cached_property
    def _links(self) -> tuple[tuple[tuple[int, int, int], ...], tuple[int, ...], tuple[int, ...]]:
        children: list[list[int]] = []
        parent: list[int] = []
        slot: list[int] = []
        # (node, next free slot) frames
        stack: list[list[int]] = []
        for letter in self.word:
            if stack:
                frame = stack[-1]
                owner, at = frame
                frame[1] += 1
                if frame[1] > RIGHT:
                    stack.pop()
            else:
                owner, at = -1, PARENT
            if letter == NODE:
                v = len(children)
                children.append([-1, -1, -1])
                parent.append(owner)
                slot.append(at)
                if owner >= 0:
                    children[owner][at - 1] = v
                stack.append([v, LEFT])
        return (
            tuple(tuple(c) for c in children),  # type: ignore[misc]
            tuple(parent),
            tuple(slot),
        )

    @property
    def children(self) -> tuple[tuple[int, int, int], ...]:
        return self._links[0]

    @property
    def parent(self) -> tuple[int, ...]:
        """Parent node of every node, ``-1`` for the root."""
        return self._links[1]

    @property
    def slot(self) -> tuple[int, ...]:
        """Slot (LEFT, MIDDLE or RIGHT) a node occupies in its parent, PARENT for the root."""
        return self._links[2]

    def child(self, v: int, at: int) -> int:
        return self.children[v][at - 1]

    @property
    def leaf_count(self) -> int:
        """Leaves including the root leaf."""
        return self.word.count(LEAF) + 1

    @property
    def closed_edge_count(self) -> int:
        return max(self.n - 1, 0)

    def __str__(self) -> str:
        return self.word


@dataclass(frozen=True)
class BicoloredTernaryTree:
    """A ternary tree whose edges alternate in color around every node."""

    tree: TernaryTree
    root_color: Color = RED

    @cached_property
    def parent_colors(self) -> tuple[Color, ...]:
        """Color of the edge in the parent slot of every node."""
        colors: list[Color] = []
        for p, at in zip(self.tree.parent, self.tree.slot):
            if p < 0:
                colors.append(self.root_color)
            else:
                colors.append(self.slot_color(at, colors[p]))
        return tuple(colors)

    @staticmethod
    def slot_color(at: int, parent_color: Color) -> Color:
        """Color of slot ``at`` around a node whose parent edge has ``parent_color``."""
        return parent_color if at in (PARENT, MIDDLE) else other(parent_color)

    def color(self, v: int, at: int) -> Color:
        return self.slot_color(at, self.parent_colors[v])

    def swapped(self) -> "BicoloredTernaryTree":
        return BicoloredTernaryTree(self.tree, other(self.root_color))

    @property
    def word(self) -> str:
        return self.tree.word

    @property
    def n(self) -> int:
        return self.tree.n

    def __str__(self) -> str:
        return f"{self.tree.word} {self.root_color}"


def bicolor(tree: TernaryTree, root_stem_color: Color = RED) -> BicoloredTernaryTree:
    if root_stem_color not in (RED, BLUE):
        raise TreeError("BAD_TREE_WORD", f"unknown root color {root_stem_color!r}")
    return BicoloredTernaryTree(tree, root_stem_color)


def count_red_edges(t: BicoloredTernaryTree) -> int:
    """Red closed edges plus red stems, the root stem included."""
    red = 1 if t.root_color == RED else 0
    for v in range(t.n):
        red += sum(1 for at in (LEFT, MIDDLE, RIGHT) if t.color(v, at) == RED)
    return red


def _is_internal(tree: TernaryTree, child: int) -> bool:
    v, at = tree.parent[child], tree.slot[child]
    if tree.child(child, RIGHT) < 0:
        return False
    if at == LEFT:
        return tree.parent[v] >= 0
    if at == MIDDLE:
        return tree.child(v, LEFT) >= 0
    return tree.child(v, MIDDLE) >= 0


def internal_edges(t: BicoloredTernaryTree) -> list[int]:
    """Closed edges, given by their child node, whose clockwise successors are closed."""
    tree = t.tree
    return [v for v in range(t.n) if tree.parent[v] >= 0 and _is_internal(tree, v)]


def count_internal_red_edges(t: BicoloredTernaryTree) -> int:
    return sum(1 for v in internal_edges(t) if t.parent_colors[v] == RED)


@cache
def _words(n: int) -> tuple[str, ...]:
    if n == 0:
        return (LEAF,)
    out = []
    for i in range(n):
        for j in range(n - i):
            k = n - 1 - i - j
            for left in _words(i):
                for middle in _words(j):
                    for right in _words(k):
                        out.append(NODE + left + middle + right)
    return tuple(out)


def enumerate_trees(n: int, cap: int = ENUMERATION_CAP) -> list[TernaryTree]:
    """All rooted ternary trees with ``n`` nodes."""
    if n < 0:
        raise TreeError("BAD_SIZE", f"n must be non-negative, got {n}")
    if n > cap:
        raise TreeError("CAP_EXCEEDED", f"n={n} is above the enumeration cap {cap}")
    return [TernaryTree(word) for word in _words(n)]


def iter_bicolored(n: int, cap: int = ENUMERATION_CAP) -> Iterator[BicoloredTernaryTree]:
    """Both colorings of every tree with ``n`` nodes."""
    for tree in enumerate_trees(n, cap):
        yield BicoloredTernaryTree(tree, RED)
        yield BicoloredTernaryTree(tree, BLUE)


def random_tree(n: int, seed: int | np.random.SeedSequence) -> TernaryTree:
    """Uniform random tree with ``n`` nodes.

    A uniform arrangement of n nodes and 2n + 1 leaves is rotated to its unique
    conjugate that reads as a prefix word.
    """
    if n < 1:
        raise TreeError("BAD_SIZE", f"n must be at least 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    letters = np.zeros(3 * n + 1, dtype=np.int8)
    letters[:n] = 1
    letters = rng.permutation(letters)
    steps = np.where(letters == 1, 2, -1)
    j = int(np.argmin(np.cumsum(steps)))
    letters = np.roll(letters, -(j + 1))
    word = "".join(NODE if x else LEAF for x in letters.tolist())
    logger.debug("sampled tree with %d nodes", n)
    return TernaryTree(word)


def random_bicolored(n: int, seed: int | np.random.SeedSequence) -> BicoloredTernaryTree:
    """Uniform random tree with a uniform root color."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    tree_seed, color_seed = ss.spawn(2)
    rng = np.random.Generator(np.random.PCG64(color_seed))
    return BicoloredTernaryTree(random_tree(n, tree_seed), RED if rng.integers(2) == 0 else BLUE)
