#!/usr/bin/env python3

import pytest

from transversal_structures.builder import PlanarMapBuilder, call_once
from transversal_structures.errors import MapError


class _Recorder:
    def __init__(self):
        self.options = {}

    @call_once
    def set_plain(self, value):
        """@call_once form"""
        self.options["plain"] = value
        return self

    @call_once()
    def set_with_parens(self, value):
        """@call_once() form"""
        self.options["parens"] = value
        return self


class TestCallOnce:
    """Test the @call_once decorator in both forms."""

    def test_plain_form(self):
        """Test that @call_once allows one call and rejects the second."""
        recorder = _Recorder()
        recorder.set_plain(1)
        with pytest.raises(MapError, match=r"REPEATED_STEP: set_plain\(\) may only be called once per builder"):
            recorder.set_plain(2)
        assert recorder.options == {"plain": 1}

    def test_parens_form(self):
        """Test that @call_once() behaves like @call_once."""
        recorder = _Recorder()
        recorder.set_with_parens(1)
        with pytest.raises(MapError, match=r"set_with_parens\(\) may only be called once"):
            recorder.set_with_parens(2)

    def test_methods_are_tracked_separately(self):
        """Test that calling one guarded method does not block another."""
        recorder = _Recorder().set_plain(1).set_with_parens(2)
        assert recorder.options == {"plain": 1, "parens": 2}

    def test_instances_are_tracked_separately(self):
        """Test that a fresh instance may call the method again."""
        _Recorder().set_plain(1)
        assert _Recorder().set_plain(2).options == {"plain": 2}

    def test_wraps_keeps_name(self):
        """Test that the wrapped method keeps its name and docstring."""
        assert _Recorder.set_plain.__name__ == "set_plain"
        assert _Recorder.set_plain.__doc__ == "@call_once form"


class TestBuilderGuards:
    """Test the guarded methods of PlanarMapBuilder."""

    def test_outer_twice(self, n1_builder):
        """Test that outer labels can only be given once."""
        builder = n1_builder.outer(0, 1, 2, 3)
        with pytest.raises(MapError, match=r"REPEATED_STEP: outer\(\) may only be called once per builder"):
            builder.outer(0, 1, 2, 3)

    def test_root_twice(self, n1_builder):
        """Test that the root dart can only be marked once."""
        builder = n1_builder.outer(0, 1, 2, 3).root(4, 3)
        with pytest.raises(MapError, match=r"root\(\) may only be called once"):
            builder.root(4, 1)

    def test_vertex_twice(self):
        """Test that a vertex cannot be added twice."""
        builder = PlanarMapBuilder().vertex(0, [1])
        with pytest.raises(MapError, match=r"REPEATED_STEP: vertex 0 is already added"):
            builder.vertex(0, [2])
