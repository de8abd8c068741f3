"""Tests for operator assembly, inner products and Green's formula."""

import math

import numpy as np
import pytest
from scipy import linalg

from dirlap.core.graph_io import load_graph
from dirlap.core.operators import (
    BoundarySupportError,
    WeightedOperator,
    apply,
    assemble,
    export_operator,
    green_residual,
    green_tolerance,
    inner,
    norm_m,
    operator_norm_B,
    vector_on,
)
from dirlap.core.spectra import eigenvalues, lambda1_symmetric
from tests.conftest import same_values


def _random_function(rng, vertices):
    return {x: complex(rng.normal(), rng.normal()) for x in vertices}


def _random_vector(rng, dimension):
    return rng.normal(size=dimension) + 1j * rng.normal(size=dimension)


def _random_subset(rng, graph):
    size = int(rng.integers(1, len(graph) + 1))
    return [graph.vertices[i] for i in sorted(rng.choice(len(graph), size=size, replace=False))]


class TestAssemble:
    """Test Dirichlet assembly of Δ, Δ′, S and B."""

    def test_delta_on_three_cycle(self, three_cycle):
        """Δ = I - P for the cyclic shift."""
        op = assemble(three_cycle, which="delta")
        expected = np.array([[1, -1, 0], [0, 1, -1], [-1, 0, 1]], dtype=float)
        np.testing.assert_allclose(op.dense(), expected)
        assert op.vertices == (0, 1, 2)

    def test_delta_prime_is_transpose_for_unit_measure(self, three_cycle):
        """With m ≡ 1, Δ′ is the transpose of Δ."""
        delta = assemble(three_cycle, which="delta").dense()
        prime = assemble(three_cycle, which="delta-prime").dense()
        np.testing.assert_allclose(prime, delta.T)

    def test_s_and_b_combinations(self, three_cycle):
        """S = (Δ + Δ′)/2 and B = Δ - Δ′."""
        delta = assemble(three_cycle, which="delta").dense()
        prime = assemble(three_cycle, which="delta-prime").dense()
        np.testing.assert_allclose(assemble(three_cycle, which="S").dense(), (delta + prime) / 2)
        np.testing.assert_allclose(assemble(three_cycle, which="B").dense(), delta - prime)

    def test_dirichlet_restriction_keeps_full_diagonal(self, three_cycle):
        """On {0, 1} the edge 1 -> 2 still counts on the diagonal."""
        op = assemble(three_cycle, [0, 1], which="delta")
        np.testing.assert_allclose(op.dense(), [[1, -1], [0, 1]])

    def test_measure_scales_rows(self, graph_file):
        """Rows are divided by m(x)."""
        graph = load_graph(graph_file)
        op = assemble(graph, which="delta", allow_boundary=True)
        np.testing.assert_allclose(op.dense(), [[0.25, -0.25], [-1 / 6, 1 / 6]])
        np.testing.assert_allclose(op.measure, [1.0, 1.5])

    def test_window_boundary_rejected(self, z_window_16):
        """Truncated rows need an explicit opt-in."""
        with pytest.raises(BoundarySupportError):
            assemble(z_window_16, which="delta")
        op = assemble(z_window_16, which="delta", allow_boundary=True)
        assert op.dimension == 33

    def test_empty_subset(self, three_cycle):
        """Empty subsets cannot be assembled."""
        with pytest.raises(ValueError, match="empty"):
            assemble(three_cycle, [], which="S")

    def test_unknown_operator(self, three_cycle):
        """Only the four labelled combinations are assembled."""
        with pytest.raises(ValueError, match="Unknown operator"):
            assemble(three_cycle, which="laplacian")

    def test_sparse_storage_matches_dense(self, z_window_16, mocker):
        """Above the dense limit CSR storage is used with the same entries."""
        subset = z_window_16.interior()
        dense = assemble(z_window_16, subset, which="S")
        mocker.patch("dirlap.core.operators.DENSE_LIMIT", 4)
        sparse = assemble(z_window_16, subset, which="S")
        assert sparse.is_sparse and not dense.is_sparse
        np.testing.assert_allclose(sparse.dense(), dense.dense())
        assert lambda1_symmetric(sparse) == pytest.approx(lambda1_symmetric(dense), rel=1e-8)

    def test_inconsistent_shapes(self):
        """The matrix, measure and vertex list must agree."""
        with pytest.raises(ValueError, match="Inconsistent"):
            WeightedOperator(np.eye(2), np.ones(3), "custom", (0, 1))


class TestInnerProducts:
    """Test ℓ²(V, m) helpers."""

    def test_sesquilinear(self, rng):
        """Linear in the first argument, conjugate-linear in the second."""
        measure = np.array([1.0, 2.0, 0.5])
        f = rng.normal(size=3) + 1j * rng.normal(size=3)
        g = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert inner(1j * f, g, measure) == pytest.approx(1j * inner(f, g, measure))
        assert inner(f, 1j * g, measure) == pytest.approx(-1j * inner(f, g, measure))
        assert inner(f, g, measure) == pytest.approx(np.conj(inner(g, f, measure)))

    def test_norm(self):
        """‖f‖_m uses the measure as weights."""
        assert norm_m(np.array([1.0, 1.0]), np.array([2.0, 2.0])) == pytest.approx(2.0)

    def test_dimension_mismatch(self, three_cycle):
        """Vectors must match the operator dimension."""
        op = assemble(three_cycle, which="delta")
        with pytest.raises(ValueError, match="Dimension mismatch"):
            apply(op, np.ones(2))
        with pytest.raises(ValueError, match="Dimension mismatch"):
            inner(np.ones(2), np.ones(3), np.ones(3))

    def test_constants_in_kernel(self, three_cycle):
        """Δ annihilates constants when every row is complete."""
        op = assemble(three_cycle, which="delta")
        np.testing.assert_allclose(apply(op, np.ones(3)), 0.0)

    def test_vector_on_rejects_unknown(self, three_cycle):
        """Functions may only live on graph vertices."""
        with pytest.raises(ValueError):
            vector_on(three_cycle, {9: 1.0})


class TestGreenFormula:
    """Test the Green residual on interior-supported functions."""

    def test_three_cycle_indicators(self, three_cycle):
        """Indicator functions of adjacent vertices."""
        residual = green_residual(three_cycle, {0: 1.0}, {1: 1.0})
        assert abs(residual) < 1e-12

    def test_circulation_corpus(self, circulation_corpus, rng):
        """Random complex f and g on every corpus graph."""
        for graph in circulation_corpus:
            f = _random_function(rng, graph.vertices)
            g = _random_function(rng, graph.vertices)
            assert abs(green_residual(graph, f, g)) <= green_tolerance(graph, f, g)

    def test_z_line_interior_support(self, z_window_16, rng):
        """Supports strictly inside the window."""
        f = _random_function(rng, range(-10, 11))
        g = _random_function(rng, range(-5, 14))
        assert abs(green_residual(z_window_16, f, g)) <= green_tolerance(z_window_16, f, g)

    def test_boundary_support_rejected(self, z_window_16):
        """Functions touching the window boundary are refused."""
        with pytest.raises(BoundarySupportError, match="interior"):
            green_residual(z_window_16, {16: 1.0}, {0: 1.0})


class TestOperatorIdentities:
    """Adjointness, symmetry and positivity of the assembled operators."""

    def test_delta_prime_is_adjoint(self, circulation_corpus, rng):
        """(Δf, g)_m = (f, Δ′g)_m on random subsets."""
        for graph in circulation_corpus:
            omega = _random_subset(rng, graph)
            delta = assemble(graph, omega, which="delta")
            prime = assemble(graph, omega, which="delta-prime")
            f = _random_vector(rng, delta.dimension)
            g = _random_vector(rng, delta.dimension)
            left = inner(apply(delta, f), g, delta.measure)
            right = inner(f, apply(prime, g), delta.measure)
            assert abs(left - right) <= 1e-10

    def test_b_is_difference(self, circulation_corpus, rng):
        """B = Δ - Δ′ entry by entry."""
        for graph in circulation_corpus:
            omega = _random_subset(rng, graph)
            difference = assemble(graph, omega, which="delta").dense() - assemble(
                graph, omega, which="delta-prime"
            ).dense()
            np.testing.assert_allclose(
                assemble(graph, omega, which="B").dense(), difference, rtol=0, atol=1e-14
            )

    def test_symmetrized_s_entries(self, circulation_corpus, rng):
        """S̃ is symmetric with S̃(x,y) = -(b(x,y) + b(y,x)) / (2√(m(x)m(y)))."""
        for graph in circulation_corpus:
            omega = _random_subset(rng, graph)
            op = assemble(graph, omega, which="S")
            tilde = np.asarray(op.symmetrized())
            np.testing.assert_allclose(tilde, tilde.T, rtol=0, atol=1e-14)
            for i, x in enumerate(op.vertices):
                for j, y in enumerate(op.vertices):
                    if i == j:
                        continue
                    expected = -float(graph.weight(x, y) + graph.weight(y, x)) / (
                        2 * math.sqrt(float(graph.measure[x]) * float(graph.measure[y]))
                    )
                    assert tilde[i, j] == pytest.approx(expected, rel=1e-14, abs=1e-14)

    def test_rayleigh_quotients_match_symmetrized(self, circulation_corpus, rng):
        """(Af, f)_m / (f, f)_m equals the Euclidean quotient of Ã at D^{1/2} f."""
        for graph in circulation_corpus:
            op = assemble(graph, _random_subset(rng, graph), which="delta")
            f = _random_vector(rng, op.dimension)
            weighted = inner(apply(op, f), f, op.measure) / inner(f, f, op.measure)
            u = np.sqrt(op.measure) * f
            euclidean = np.vdot(u, np.asarray(op.symmetrized()) @ u) / np.vdot(u, u)
            assert abs(weighted - euclidean) <= 1e-12 * max(1.0, abs(weighted))
            assert same_values(eigenvalues(op), linalg.eigvals(op.dense()), 1e-8)

    def test_green_positivity_on_subsets(self, circulation_corpus, rng):
        """Re(Δ^D f, f)_m >= 0 for f supported in the subset."""
        for graph in circulation_corpus:
            op = assemble(graph, _random_subset(rng, graph), which="delta")
            for _ in range(5):
                f = _random_vector(rng, op.dimension)
                assert inner(apply(op, f), f, op.measure).real >= -1e-12


class TestOperatorNorms:
    """Test ‖B‖ and spectra of small operators."""

    def test_b_norm_three_cycle(self, three_cycle):
        """B is skew-circulant with eigenvalues 0 and ±i√3."""
        assert operator_norm_B(three_cycle) == pytest.approx(math.sqrt(3))

    def test_b_norm_bounded_by_gamma(self, z_window_16):
        """‖B‖ <= M = 1 on the integer line."""
        assert operator_norm_B(z_window_16) <= 1.0 + 1e-8

    def test_three_cycle_eigenvalues(self, three_cycle):
        """Δ has eigenvalues 0 and 3/2 ± i√3/2; S has 0, 3/2, 3/2."""
        values = eigenvalues(assemble(three_cycle, which="delta"))
        np.testing.assert_allclose(
            values, [0, 1.5 - 1j * math.sqrt(3) / 2, 1.5 + 1j * math.sqrt(3) / 2], atol=1e-12
        )
        symmetric = eigenvalues(assemble(three_cycle, which="S"))
        np.testing.assert_allclose(symmetric, [0, 1.5, 1.5], atol=1e-12)


class TestExport:
    """Test triplet export."""

    def test_export_three_cycle(self, three_cycle, tmp_path):
        """Six nonzeros and one measure line per vertex."""
        triplets, measure = export_operator(assemble(three_cycle, which="delta"), tmp_path / "delta")
        lines = triplets.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 6
        assert lines[0] == "0 0 1"
        assert lines[1] == "0 1 -1"
        assert measure.read_text(encoding="utf-8").splitlines() == ["0 0 1", "1 1 1", "2 2 1"]
