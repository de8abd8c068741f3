"""Tests for graph generators."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from dirlap.core.generators import (
    GeneratorSpec,
    build_graph,
    build_window,
    default_root,
    gen_circulation_random,
    gen_directed_cycle,
    gen_symmetric_line,
    gen_z_line,
    z_line_backward,
    z_line_forward,
    z_line_h_tilde_envelope,
)
from dirlap.core.graph import validate


class TestZLine:
    """Test the integer-line window."""

    def test_weights(self):
        """b(l, l+1) - b(l+1, l) = 1/2 with the cubic profile."""
        assert z_line_forward(0) == Fraction(3, 4)
        assert z_line_backward(0) == Fraction(1, 4)
        assert z_line_forward(-2) == Fraction(19, 4)
        assert z_line_forward(5) - z_line_backward(5) == Fraction(1, 2)

    def test_window_shape(self):
        """2r + 1 vertices, 4r edges, ends on the window boundary."""
        graph = gen_z_line(6)
        assert len(graph) == 13
        assert graph.edge_count == 24
        assert graph.window_boundary == frozenset({-6, 6})
        assert graph.weight(2, 3) == z_line_forward(2)
        assert graph.weight(3, 2) == z_line_backward(2)

    def test_beta_exact(self):
        """(β) holds exactly on the interior."""
        report = validate(gen_z_line(10))
        assert report.exact_arithmetic
        assert report.beta_max_deviation == 0.0

    def test_rejects_radius_zero(self):
        """Radius must be positive."""
        with pytest.raises(ValueError):
            gen_z_line(0)

    def test_envelope(self):
        """Closed-form envelope values."""
        assert z_line_h_tilde_envelope(1) == pytest.approx(56 / 18)
        assert z_line_h_tilde_envelope(2) == pytest.approx(266 / 105)


class TestOtherGenerators:
    """Test cycles, symmetric lines and random circulations."""

    def test_symmetric_line(self):
        """Equal weights both ways give M = 0."""
        graph = gen_symmetric_line(4, Fraction(3, 2))
        assert graph.weight(0, 1) == graph.weight(1, 0) == Fraction(3, 2)
        assert validate(graph).gamma_constant == 0.0

    def test_cycle_without_backward_edges(self):
        """A zero backward weight omits the reverse edges."""
        graph = gen_directed_cycle(5)
        assert graph.edge_count == 5
        assert graph.weight(4, 0) == 1

    def test_cycle_with_backward_edges(self):
        """Both orientations present."""
        graph = gen_directed_cycle(4, forward_weight=2.0, backward_weight=0.5)
        assert graph.edge_count == 8
        assert graph.weight(1, 0) == Fraction(1, 2)
        assert validate(graph).beta_holds

    def test_cycle_too_short(self):
        """Cycles need three vertices."""
        with pytest.raises(ValueError):
            gen_directed_cycle(2)

    def test_circulation_corpus_is_balanced(self, circulation_corpus):
        """Every sampled circulation satisfies (β) exactly and is connected."""
        for graph in circulation_corpus:
            report = validate(graph)
            assert report.beta_max_deviation == 0.0
            assert report.connectivity_class != "disconnected"

    def test_circulation_is_seeded(self):
        """The same seed gives the same graph; another seed differs."""
        first = gen_circulation_random(15, seed=7)
        again = gen_circulation_random(15, seed=7)
        other = gen_circulation_random(15, seed=8)
        assert first.weights == again.weights
        assert first.measure == again.measure
        assert first.weights != other.weights

    def test_circulation_gives_up(self):
        """No edges can never be connected."""
        with pytest.raises(ValueError, match="weakly connected"):
            gen_circulation_random(5, symmetric_density=0.0, cycle_count=0)


class TestGeneratorSpec:
    """Test spec validation and dispatch."""

    def test_file_kind_needs_path(self):
        """kind 'file' without a path is invalid."""
        with pytest.raises(ValidationError):
            GeneratorSpec(kind="file")

    def test_bad_weight_range(self):
        """low must not exceed high."""
        with pytest.raises(ValidationError):
            GeneratorSpec(kind="circulation-random", weight_range=(2.0, 1.0))

    def test_unknown_kind(self):
        """Only the listed generators exist."""
        with pytest.raises(ValidationError):
            GeneratorSpec(kind="torus")

    def test_symmetric_random_has_no_antisymmetry(self):
        """Without cycles every edge weight is matched by its reverse."""
        graph = build_graph(GeneratorSpec(kind="symmetric-random", size=10, seed=2))
        assert validate(graph).gamma_constant == 0.0

    def test_build_window_from_file(self, graph_file):
        """File windows are rooted at their first vertex."""
        graph, filtration = build_window(GeneratorSpec(kind="file", path=graph_file))
        assert default_root(graph) == "a"
        assert filtration.level(0).vertices == frozenset({"a"})
        assert len(filtration) == 2

    def test_build_window_z_line(self):
        """The integer line is rooted at 0."""
        graph, filtration = build_window(GeneratorSpec(kind="z-line", radius=5))
        assert filtration.level(2).vertices == frozenset(range(-2, 3))
        assert len(filtration) == 6
