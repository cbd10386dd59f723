import numpy as np
import pytest

from transversal_structures.bijection import closure, minimal_partition
from transversal_structures.errors import MapError, StructureError
from transversal_structures.planar_map import canonical_form
from transversal_structures.ternary_tree import BicoloredTernaryTree, enumerate_trees, random_bicolored
from transversal_structures.transversal import (
    EdgePartition,
    TransversalStructure,
    alpha0_targets,
    blue_map,
    enumerate_alpha0,
    enumerate_partitions,
    enumerate_structures,
    find_alpha0,
    find_alternating_cycles,
    find_essential_circuits,
    find_right_alternating_cycles,
    flip,
    flop,
    minimalize,
    orient_partition,
    propagate_directions,
    psi,
    red_map,
    rotate_structure,
    sweep_preimage,
    verify_partition,
    verify_structure,
)


def _red_closures(n):
    for tree in enumerate_trees(n):
        yield closure(BicoloredTernaryTree(tree, "red"))


def _triangulations(n):
    """Closed triangulations with n inner vertices, one per labeled isomorphism class."""
    seen = set()
    for tri, _ in _red_closures(n):
        form = canonical_form(tri)
        if form not in seen:
            seen.add(form)
            yield tri


def _left_cycles(tri, ep):
    return [c for c in find_alternating_cycles(tri, ep) if c.chirality == "left"]


@pytest.fixture(scope="module")
def random_closures():
    """Closures of random trees with fifteen nodes."""
    return [closure(random_bicolored(15, seed)) for seed in range(10)]


class TestVerifyStructure:
    """Test the checks on colorings and orientations."""

    def test_n1_structure(self, n1, n1_structure):
        """Test that the only structure of n=1 passes."""
        report = verify_structure(n1, n1_structure)
        assert report.ok
        assert str(report) == "structure: pass"

    def test_dart_types(self, n1, n1_structure):
        """Test dart types read from both ends of an edge."""
        m = n1.map
        assert n1_structure.dart_type(m.dart_between(3, 4)) == "OR"
        assert n1_structure.dart_type(m.dart_between(4, 3)) == "IR"
        assert n1_structure.dart_type(m.dart_between(0, 4)) == "OB"
        assert n1_structure.dart_type(m.dart_between(0, 1)) is None

    def test_colored_outer_edge(self, n1, n1_structure):
        """Test that outer edges must stay uncolored."""
        outer = n1.map.dart_between(0, 1) >> 1
        colors = list(n1_structure.partition.colors)
        colors[outer] = "red"
        report = verify_partition(n1, EdgePartition(n1, tuple(colors)))
        assert report.conditions() == {"COLORS"}

    def test_uncolored_inner_edge(self, n1, n1_structure):
        """Test that inner edges need a color."""
        colors = list(n1_structure.partition.colors)
        colors[n1.map.dart_between(4, 2) >> 1] = None
        report = verify_partition(n1, EdgePartition(n1, tuple(colors)))
        assert report.conditions() == {"COLORS"}

    def test_wrong_pole_colors(self, n1, n1_structure):
        """Test that swapping every color breaks the pole conditions only."""
        report = verify_partition(n1, n1_structure.partition.swapped())
        assert report.conditions() == {"C2"}
        assert len(report.violations) == 4

    def test_reversed_edge(self, n1):
        """Test that pointing the edge at N backwards breaks the orientation checks."""
        edges = [(3, 4, "red"), (1, 4, "red"), (0, 4, "blue"), (4, 2, "blue")]
        report = verify_structure(n1, TransversalStructure.from_oriented(n1, edges))
        assert {"C2'", "C1'", "POLES"} <= report.conditions()

    def test_missing_direction(self, n1, n1_structure):
        """Test that a partition without directions fails."""
        bare = TransversalStructure(n1_structure.partition, (-1,) * n1.map.edge_count)
        assert verify_structure(n1, bare).conditions() == {"DIRECTION"}

    def test_from_oriented_unknown_edge(self, n1):
        """Test that structure edges must exist in the map."""
        with pytest.raises(MapError, match="BAD_VERTEX_IDS"):
            TransversalStructure.from_oriented(n1, [(0, 2, "blue")])

    def test_from_colors_mapping(self, n1, n1_structure):
        """Test that a partition may be given per vertex pair."""
        ep = EdgePartition.from_colors(n1, {(3, 4): "red", (1, 4): "red", (0, 4): "blue", (2, 4): "blue"})
        assert ep.colors == n1_structure.partition.colors
        assert len(ep.edges_of("red")) == 2


class TestAlpha0:
    """Test angle orientations and the sweep back to structures."""

    def test_targets(self, n1):
        """Test prescribed outdegrees: whites 1, inner 4, N and S 2, W and E 0."""
        targets = alpha0_targets(n1.angular)
        assert targets[:5] == [0, 2, 0, 2, 4]
        assert targets[5:] == [1, 1, 1, 1]

    def test_psi_is_valid(self, n1, n1_structure):
        """Test that the angles of a structure form an alpha0-orientation."""
        assert psi(n1, n1_structure.partition).is_valid()

    def test_find_alpha0(self, n1, n1_structure):
        """Test that the flow finds the only orientation of n=1."""
        found = find_alpha0(n1)
        assert found.is_valid()
        assert found == psi(n1, n1_structure.partition)

    def test_sweep_n1(self, n1, n1_structure):
        """Test that the sweep recovers colors and directions of n=1."""
        ts = sweep_preimage(n1, psi(n1, n1_structure.partition))
        assert ts.partition.colors == n1_structure.partition.colors
        assert ts.direction == n1_structure.direction

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_sweep_gives_valid_structures(self, n):
        """Test that the sweep on a flow orientation yields a valid structure."""
        for tri, _ in _red_closures(n):
            ts = sweep_preimage(tri, find_alpha0(tri))
            assert verify_structure(tri, ts).ok

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_psi_of_sweep(self, n):
        """Test that psi undoes the sweep on every orientation."""
        for tri in _triangulations(n):
            for orientation in enumerate_alpha0(tri):
                ts = sweep_preimage(tri, orientation)
                assert psi(tri, ts.partition) == orientation


class TestOrientation:
    """Test recovering directions from colors."""

    def test_propagate_n1(self, n1, n1_structure):
        """Test the linear-time orientation on n=1."""
        ts = propagate_directions(n1, n1_structure.partition)
        assert ts.direction == n1_structure.direction

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_propagate_matches_sweep(self, n):
        """Test that both orientation routines agree."""
        for tri, ep in _red_closures(n):
            fast = propagate_directions(tri, ep)
            assert fast.direction == orient_partition(tri, ep).direction
            assert verify_structure(tri, fast).ok

    def test_propagate_bad_runs(self, n1, n1_structure):
        """Test that a vertex without four color runs cannot be oriented."""
        ep = n1_structure.partition.with_colors({n1.map.dart_between(4, 2) >> 1: "red"})
        with pytest.raises(StructureError, match="NO_ORIENTATION: vertex 4 has 2 color runs"):
            propagate_directions(n1, ep)


class TestOracles:
    """Test exhaustive enumeration on small triangulations."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_partitions_match_orientations(self, n):
        """Test that partitions and alpha0-orientations are equinumerous."""
        for tri, ep in _red_closures(n):
            partitions = enumerate_partitions(tri)
            assert len(partitions) == len(enumerate_alpha0(tri))
            assert ep.colors in {p.colors for p in partitions}

    def test_single_partition_n1(self, n1, n1_structure):
        """Test that n=1 has exactly one partition."""
        partitions = enumerate_partitions(n1)
        assert [p.colors for p in partitions] == [n1_structure.partition.colors]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_every_partition_minimalizes_to_one(self, n):
        """Test that flipping from any partition ends at the same minimum."""
        for tri, ep in _red_closures(n):
            for p in enumerate_partitions(tri):
                assert minimalize(tri, p).colors == ep.colors

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_lattice_walk_matches_brute_force(self, n):
        """Test that flopping up from the minimum reaches every partition once."""
        for tri in _triangulations(n):
            structures = enumerate_structures(tri)
            colors = [ts.partition.colors for ts in structures]
            assert len(set(colors)) == len(colors)
            assert set(colors) == {p.colors for p in enumerate_partitions(tri)}
            assert len(structures) == len(enumerate_alpha0(tri))
            assert all(verify_structure(tri, ts).ok for ts in structures)

    def test_cap(self, n1):
        """Test that the oracles refuse sizes above the cap."""
        with pytest.raises(StructureError, match="CAP_EXCEEDED"):
            enumerate_partitions(n1, cap=0)
        with pytest.raises(StructureError, match="CAP_EXCEEDED"):
            enumerate_alpha0(n1, cap=0)
        with pytest.raises(StructureError, match="CAP_EXCEEDED"):
            enumerate_structures(n1, cap=0)
        with pytest.raises(StructureError, match="CAP_EXCEEDED"):
            find_essential_circuits(find_alpha0(n1), cap=0)


def _circuit_shape_ok(orientation, circuit):
    """A face of the angular map, or eight vertices shut off from the inside."""
    ang = orientation.angular
    q = ang.map
    if len(circuit) == 4:
        return len(circuit.interior) == 1
    if len(circuit) != 8:
        return False
    on_cycle = set(circuit.darts)
    for v in circuit.vertices:
        off_cycle = [d for d in q.rotation(v) if d not in on_cycle and d ^ 1 not in on_cycle]
        inside = [d for d in off_cycle if q.face_of[d] in circuit.interior and q.face_of[d ^ 1] in circuit.interior]
        if ang.is_black(v):
            if any(orientation.tail(d >> 1) == v for d in inside):
                return False
        elif len(inside) != 1:
            return False
    return sum(ang.is_black(v) for v in circuit.vertices) == 4


class TestEssentialCircuits:
    """Test essential clockwise circuits of alpha0-orientations."""

    def test_n1_has_none(self, n1):
        """Test that the only orientation of n=1 has no essential circuit."""
        assert find_essential_circuits(find_alpha0(n1)) == []

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_circuit_shapes(self, n):
        """Test that essential clockwise circuits have length 4 or 8."""
        for tri in _triangulations(n):
            for p in enumerate_partitions(tri):
                orientation = psi(tri, p)
                for circuit in find_essential_circuits(orientation):
                    assert _circuit_shape_ok(orientation, circuit), circuit

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_match_right_cycles(self, n):
        """Test that essential clockwise circuits and right alternating 4-cycles correspond."""
        for tri in _triangulations(n):
            for p in enumerate_partitions(tri):
                circuits = find_essential_circuits(psi(tri, p))
                from_circuits = sorted(sorted(c.four_cycle_vertices(tri.angular)) for c in circuits)
                from_cycles = sorted(sorted(c.vertices) for c in find_right_alternating_cycles(tri, p))
                assert from_circuits == from_cycles

    def test_minimum_has_none(self):
        """Test that closure orientations have no essential clockwise circuit."""
        for tri, ep in _red_closures(4):
            assert find_essential_circuits(psi(tri, ep)) == []


class TestFlips:
    """Test flips, flops and minimalization."""

    def test_closures_are_minimal(self, random_closures):
        """Test that closure yields a partition without right cycles."""
        for tri, ep in random_closures:
            assert verify_partition(tri, ep).ok
            assert find_right_alternating_cycles(tri, ep) == []

    def test_flop_then_flip(self, random_closures):
        """Test that flip undoes flop on every left cycle."""
        found = 0
        for tri, ep in random_closures:
            for cycle in _left_cycles(tri, ep):
                found += 1
                flopped = flop(tri, ep, cycle)
                assert verify_partition(tri, flopped).ok
                assert flopped.colors != ep.colors
                assert flip(tri, flopped, cycle).colors == ep.colors
        assert found > 0

    def test_flip_requires_right_cycle(self, random_closures):
        """Test that a left cycle cannot be flipped and a right one cannot be flopped."""
        tri, ep, cycle = next(
            (tri, ep, cycles[0])
            for tri, ep in random_closures
            if (cycles := _left_cycles(tri, ep))
        )
        with pytest.raises(StructureError, match="NOT_RIGHT_CYCLE"):
            flip(tri, ep, cycle)
        with pytest.raises(StructureError, match="NOT_LEFT_CYCLE"):
            flop(tri, flop(tri, ep, cycle), cycle)

    def test_minimalize_any_order(self, random_closures):
        """Test that the minimum does not depend on the order of flips."""
        for tri, ep in random_closures:
            moved = ep
            for cycle in _left_cycles(tri, ep):
                try:
                    moved = flop(tri, moved, cycle)
                except StructureError:
                    continue
            assert minimalize(tri, moved).colors == ep.colors
            assert minimalize(tri, moved, chooser=lambda cycles: cycles[-1]).colors == ep.colors

    def test_minimal_partition(self, random_closures):
        """Test that the flow-and-flip route finds the closure partition."""
        for tri, ep in random_closures[:4]:
            assert minimal_partition(tri).colors == ep.colors

    def test_rotate_structure(self, random_closures):
        """Test that quarter turns keep a valid partition."""
        tri, ep = random_closures[0]
        for turns in range(4):
            rotated, rotated_ep = rotate_structure(tri, ep, turns)
            assert verify_partition(rotated, rotated_ep).ok


class TestBipolarMaps:
    """Test the red and blue bipolar maps."""

    def test_n1(self, n1, n1_structure):
        """Test poles and faces of the n=1 maps."""
        red, blue = red_map(n1, n1_structure), blue_map(n1, n1_structure)
        assert (red.source, red.sink) == (3, 1)
        assert (blue.source, blue.sink) == (0, 2)
        assert red.inner_face_count == blue.inner_face_count == 2
        assert red.is_bipolar() and blue.is_bipolar()

    def test_random(self, random_closures):
        """Test that both maps are bipolar on random structures."""
        for tri, ep in random_closures:
            ts = propagate_directions(tri, ep)
            assert red_map(tri, ts).is_bipolar()
            assert blue_map(tri, ts).is_bipolar()


@pytest.mark.slow
class TestFlipLattice:
    """Test random walks up the flip lattice of larger triangulations."""

    def test_random_flop_walks(self):
        """Test validity, flip-flop inverses and a fixed minimum along 500 walks of 20 flops."""
        flops = 0
        for seed in range(500):
            tri, minimum = closure(random_bicolored(5 + seed % 46, seed))
            rng = np.random.default_rng(seed)
            ep = minimum
            for _ in range(20):
                left = _left_cycles(tri, ep)
                if not left:
                    break
                cycle = left[rng.integers(len(left))]
                up = flop(tri, ep, cycle)
                flops += 1
                assert verify_partition(tri, up).ok
                assert flip(tri, up, cycle).colors == ep.colors
                assert minimalize(tri, up).colors == minimum.colors
                ep = up
            last = minimalize(tri, ep, chooser=lambda cycles: cycles[-1])
            shuffled = minimalize(tri, ep, chooser=lambda cycles: cycles[rng.integers(len(cycles))])
            assert last.colors == shuffled.colors == minimum.colors
        assert flops > 5000
