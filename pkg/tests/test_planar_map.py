import pytest

from transversal_structures.builder import PlanarMapBuilder
from transversal_structures.errors import MapError
from transversal_structures.planar_map import (
    build_map,
    canonical_form,
    rotate_labels,
    unlabeled_canonical_form,
    validate_irreducible,
)

# K4 drawn as a triangle 1, 2, 3 around vertex 0
K4_PLANAR = [[1, 2, 3], [2, 0, 3], [3, 0, 1], [1, 0, 2]]

# n=1 with an extra vertex 5 inside the face W, c, S
SEPARATED = [[3, 5, 4, 1], [0, 4, 2], [1, 4, 3], [2, 4, 5, 0], [2, 1, 0, 5, 3], [4, 0, 3]]


class TestBuildMapErrors:
    """Test that build_map rejects invalid rotation systems."""

    def test_self_loop(self):
        """Test that a vertex may not list itself."""
        with pytest.raises(MapError, match="SELF_LOOP"):
            build_map([[0]])

    def test_missing_twin(self):
        """Test that every edge must appear at both ends."""
        with pytest.raises(MapError, match="MISSING_TWIN"):
            build_map([[1], []])

    def test_duplicate_edge(self):
        """Test that a neighbour may not be listed twice."""
        with pytest.raises(MapError, match="DUPLICATE_EDGE") as info:
            build_map([[1, 1], [0]])
        assert info.value.code == "DUPLICATE_EDGE"

    def test_disconnected(self):
        """Test that two separate edges do not form a map."""
        with pytest.raises(MapError, match="DISCONNECTED"):
            build_map([[1], [0], [3], [2]])

    def test_non_planar_rotation(self):
        """Test that a toroidal rotation of K4 fails the Euler relation."""
        toroidal = [[1, 3, 2], [0, 3, 2], [0, 1, 3], [0, 2, 1]]
        with pytest.raises(MapError, match="NON_PLANAR_ROTATION"):
            build_map(toroidal)

    def test_sparse_mapping(self):
        """Test that mapping keys must be 0..V-1."""
        with pytest.raises(MapError, match="BAD_VERTEX_IDS"):
            build_map({0: [2], 2: [0]})

    def test_bad_hint(self):
        """Test that the hint must be a face read clockwise."""
        with pytest.raises(MapError, match="BAD_OUTER_HINT"):
            build_map(K4_PLANAR, [1, 2, 3])


class TestPlanarMap:
    """Test dart queries on the n=1 triangulation."""

    def test_counts(self, n1):
        """Test vertex, edge and face counts."""
        m = n1.map
        assert (m.vertex_count, m.edge_count, m.face_count) == (5, 8, 5)
        assert m.dart_count == 16

    def test_twin_and_edge(self, n1):
        """Test that darts 2k and 2k+1 form edge k."""
        m = n1.map
        for d in range(m.dart_count):
            assert m.twin(m.twin(d)) == d
            assert m.edge(d) == m.edge(m.twin(d))
            assert m.head(d) == m.tail(m.twin(d))

    def test_rotation_order(self, n1):
        """Test that rotations come back counterclockwise from the input."""
        assert n1.map.neighbours(4) == (2, 1, 0, 3)
        assert n1.map.rotation_system()[0] == [3, 4, 1]

    def test_next_and_prev(self, n1):
        """Test that prev undoes next."""
        m = n1.map
        for d in range(m.dart_count):
            assert m.prev(m.next(d)) == d

    def test_inner_faces_are_clockwise_triangles(self, n1):
        """Test that every inner face is a triangle through the centre."""
        m = n1.map
        for f in n1.inner_faces():
            assert len(m.faces[f]) == 3
            assert 4 in m.face_vertices(f)
        face = m.face_right(m.dart_between(0, 4))
        assert sorted(m.face_vertices(face)) == [0, 3, 4]

    def test_outer_face(self, n1):
        """Test that the outer face runs W, S, E, N."""
        m = n1.map
        assert m.face_right(m.dart_between(0, 3)) == m.outer_face
        assert len(n1.outer_edges) == 4

    def test_darts_view(self, n1):
        """Test the Dart records."""
        dart = n1.map.darts[n1.map.dart_between(4, 2)]
        assert dart.vertex == 4
        assert dart.twin == dart.id ^ 1
        assert n1.map.head(dart.next_around_vertex) == 1

    def test_dart_between_unknown(self, n1):
        """Test that non-adjacent vertices have no dart."""
        assert not n1.map.has_edge(0, 2)
        with pytest.raises(KeyError):
            n1.map.dart_between(0, 2)

    def test_networkx_view(self, n1):
        """Test the networkx graph."""
        graph = n1.map.to_networkx()
        assert graph.number_of_nodes() == 5
        assert graph.number_of_edges() == 8
        assert graph.degree(4) == 4

    def test_cycle_interior(self, n1):
        """Test that the outer 4-cycle read clockwise encloses every inner face on its right."""
        m = n1.map
        cycle = [m.dart_between(a, b) for a, b in ((0, 1), (1, 2), (2, 3), (3, 0))]
        faces, on_right = m.cycle_interior(cycle)
        assert on_right
        assert faces == frozenset(n1.inner_faces())

    def test_cycle_interior_counterclockwise(self, n1):
        """Test that a counterclockwise triangle has its interior on the left."""
        m = n1.map
        cycle = [m.dart_between(a, b) for a, b in ((0, 3), (3, 4), (4, 0))]
        faces, on_right = m.cycle_interior(cycle)
        assert not on_right
        assert faces == frozenset({m.face_right(m.dart_between(0, 4))})


class TestValidateIrreducible:
    """Test the irreducibility checks."""

    def test_n1(self, n1):
        """Test the labels and inner elements of the n=1 triangulation."""
        assert (n1.W, n1.N, n1.E, n1.S) == (0, 1, 2, 3)
        assert n1.n == 1
        assert n1.inner_vertices() == [4]
        assert len(n1.inner_edges()) == 4
        assert len(n1.inner_faces()) == 4
        assert n1.label(2) == "E"
        assert n1.label(4) is None
        assert n1.is_outer(3) and not n1.is_outer(4)

    def test_mapping_labels(self, n1):
        """Test that labels may be given by name."""
        tri = validate_irreducible(n1.map, {"W": 0, "N": 1, "E": 2, "S": 3})
        assert tri.outer_vertices == (0, 1, 2, 3)

    def test_counterclockwise_labels(self, n1):
        """Test that labels must run clockwise."""
        with pytest.raises(MapError, match="BAD_LABEL_ORDER"):
            validate_irreducible(n1.map, (0, 3, 2, 1))

    def test_labels_off_the_outer_face(self, n1):
        """Test that labels must name the outer vertices."""
        with pytest.raises(MapError, match="BAD_LABEL_ORDER"):
            validate_irreducible(n1.map, (0, 1, 2, 4))

    def test_triangular_outer_face(self):
        """Test that a triangle is not a valid outer face."""
        with pytest.raises(MapError, match="NOT_QUAD_OUTER"):
            validate_irreducible(build_map(K4_PLANAR), (1, 2, 3, 0))

    def test_quadrangular_inner_face(self):
        """Test that a bare 4-cycle has a non-triangular inner face."""
        with pytest.raises(MapError, match="NON_TRIANGULAR_INNER_FACE"):
            PlanarMapBuilder().vertices([[3, 1], [0, 2], [1, 3], [2, 0]]).outer(0, 1, 2, 3).build()

    def test_separating_triangle(self):
        """Test that a 3-cycle around a vertex is rejected."""
        with pytest.raises(MapError, match=r"SEPARATING_TRIANGLE: 3-cycle \(0, 3, 4\)"):
            PlanarMapBuilder().vertices(SEPARATED).outer(0, 1, 2, 3).build()


class TestCanonicalForm:
    """Test canonical forms and label rotation."""

    def test_relabeling_invariance(self, n1):
        """Test that renaming vertices keeps the canonical form."""
        perm = [4, 3, 2, 1, 0]
        rotations = [None] * 5
        for v, nbrs in enumerate(n1.map.rotation_system()):
            rotations[perm[v]] = [perm[u] for u in nbrs]
        renamed = PlanarMapBuilder().vertices(rotations).outer(4, 3, 2, 1).build()
        assert canonical_form(renamed) == canonical_form(n1)

    def test_with_root(self, n1_builder):
        """Test that the root marker is part of the rooted form only."""
        a = n1_builder.outer(0, 1, 2, 3).root(4, 3).build()
        b = PlanarMapBuilder().vertices(a.map.rotation_system()).outer(0, 1, 2, 3).root(4, 1).build()
        assert canonical_form(a) == canonical_form(b)
        assert canonical_form(a, with_root=True) != canonical_form(b, with_root=True)
        # BFS labels: W=0, N=1, S=2, centre=3
        assert canonical_form(a, with_root=True)[2] == (3, 2)

    def test_rotate_labels(self, n1):
        """Test that one quarter turn makes the old S the new W."""
        turned = rotate_labels(n1, 1)
        assert turned.outer_vertices == (3, 0, 1, 2)
        assert rotate_labels(n1, 4) is n1
        assert rotate_labels(turned, 3).outer_vertices == n1.outer_vertices

    def test_unlabeled_form(self, n1):
        """Test that label rotations share the unlabeled form."""
        forms = {unlabeled_canonical_form(rotate_labels(n1, k)) for k in range(4)}
        assert len(forms) == 1


class TestAngularGraph:
    """Test the angular graph of the n=1 triangulation."""

    def test_sizes(self, n1):
        """Test that there is one edge per inner angle."""
        ang = n1.angular
        assert ang.black_count == 5
        assert ang.map.vertex_count == 5 + 4
        assert ang.map.edge_count == 6 * n1.n + 6

    def test_white_degrees(self, n1):
        """Test that every white vertex sees the three corners of its face."""
        ang = n1.angular
        for w in range(ang.black_count, ang.map.vertex_count):
            assert not ang.is_black(w)
            assert ang.map.degree(w) == 3

    def test_angles_round_trip(self, n1):
        """Test that angle ids map back to their edges."""
        ang = n1.angular
        for k, angle in enumerate(ang.angle_of_edge):
            assert ang.edge_of_angle[angle] == k
            assert n1.map.tail(angle) == ang.map.tail(2 * k)

    def test_cached(self, n1):
        """Test that the angular graph is built once."""
        assert n1.angular is n1.angular
