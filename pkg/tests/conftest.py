import math

import pytest

from transversal_structures.builder import PlanarMapBuilder
from transversal_structures.drawing import GridDrawing
from transversal_structures.ternary_tree import BicoloredTernaryTree, TernaryTree
from transversal_structures.transversal import TransversalStructure

# The only triangulation with one inner vertex: W, N, E, S = 0, 1, 2, 3, centre 4
N1_ROTATIONS = {
    0: [3, 4, 1],
    1: [0, 4, 2],
    2: [1, 4, 3],
    3: [2, 4, 0],
    4: [2, 1, 0, 3],
}
N1_OUTER = (0, 1, 2, 3)
N1_STRUCTURE = [(3, 4, "red"), (4, 1, "red"), (0, 4, "blue"), (4, 2, "blue")]
N1_COORDS = ((0, 2), (2, 2), (2, 0), (0, 0), (1, 1))


@pytest.fixture
def n1():
    return PlanarMapBuilder().vertices(N1_ROTATIONS).outer(*N1_OUTER).build()


@pytest.fixture
def n1_structure(n1):
    return TransversalStructure.from_oriented(n1, N1_STRUCTURE)


@pytest.fixture
def n1_drawing():
    return GridDrawing(N1_COORDS, 2, 2)


@pytest.fixture
def star_tree():
    """One node, three leaves, red root stem."""
    return BicoloredTernaryTree(TernaryTree("NLLL"), "red")


@pytest.fixture
def left_chain_tree():
    """Root with a single child in its left slot."""
    return BicoloredTernaryTree(TernaryTree("NNLLLLL"), "red")


@pytest.fixture
def n1_builder():
    """Builder holding the n=1 rotations, outer labels not yet given."""
    return PlanarMapBuilder().vertices(N1_ROTATIONS)


@pytest.fixture
def assert_uniform():
    """Chi-square check of category counts against the uniform law, at level 1e-4."""

    def check(counts, categories):
        assert len(counts) == categories
        total = sum(counts.values())
        expected = total / categories
        statistic = sum((c - expected) ** 2 / expected for c in counts.values())
        df = categories - 1
        # Wilson-Hilferty upper quantile; 3.719 is the standard normal 1e-4 quantile
        q = 2 / (9 * df)
        bound = df * (1 - q + 3.719 * math.sqrt(q)) ** 3
        assert statistic < bound, f"chi-square {statistic:.1f} exceeds {bound:.1f} at {df} df"

    return check
