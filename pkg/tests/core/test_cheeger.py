"""Tests for Cheeger constants, the Cheeger chain and the (Abs) table."""

import logging
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirlap.core.cheeger import (
    M_sup,
    abs_condition,
    abs_verdict,
    boundary_weight,
    cheeger_constant,
    cheeger_exact,
    cheeger_heuristic,
    cheeger_ratio,
    exact_feasible,
    h_infinity_trend,
    inequality_check,
    power_law_fit,
)
from dirlap.core.generators import gen_circulation_random, z_line_h_tilde_envelope
from dirlap.core.models import Filtration
from dirlap.core.operators import BoundarySupportError


def _brute_force(graph, omega, variant):
    omega = list(omega)
    return min(
        cheeger_ratio(graph, subset, variant)
        for size in range(1, len(omega) + 1)
        for subset in combinations(omega, size)
    )


class TestBoundaryWeight:
    """Test b(∂_E U) and M_Ω."""

    def test_three_cycle_singleton(self, three_cycle):
        """One edge in, one edge out."""
        assert boundary_weight(three_cycle, [0]) == 2.0

    def test_z_line_block(self, z_window_16):
        """(|0|³ + 1) + (|4|³ + 1) = 66."""
        assert boundary_weight(z_window_16, [1, 2, 3, 4]) == 66.0

    def test_window_boundary_warns(self, z_window_16, caplog):
        """Sets reaching the window edge undercount and say so."""
        with caplog.at_level(logging.WARNING, logger="dirlap.core.cheeger"):
            boundary_weight(z_window_16, [15, 16])
        assert "undercounts" in caplog.text

    def test_m_sup(self, z_window_16):
        """β⁺(5) = 95.5 on the positive side; the negative side is heavier."""
        assert M_sup(z_window_16, [2, 3, 4, 5]) == 95.5
        assert M_sup(z_window_16, [-5, -4, -3, -2, 2, 3, 4, 5]) == 171.5

    def test_m_sup_empty(self, three_cycle):
        """Empty subsets are rejected."""
        with pytest.raises(ValueError):
            M_sup(three_cycle, [])


class TestExactCheeger:
    """Test exact Cheeger constants against enumeration."""

    def test_three_cycle_pair(self, three_cycle):
        """h = h̃ = 1 on {0, 1}, attained by the whole pair."""
        h = cheeger_exact(three_cycle, [0, 1], "h")
        assert h.value == pytest.approx(1.0)
        assert h.witness.vertices == frozenset({0, 1})
        assert h.mode == "exact"
        assert cheeger_exact(three_cycle, [0, 1], "h-tilde").value == pytest.approx(1.0)

    def test_z_line_interval(self, z_window_16):
        """On {2..6} the singleton {2} is best: (2 + 9)/1."""
        omega = [2, 3, 4, 5, 6]
        fragment = cheeger_exact(z_window_16, omega, "h")
        assert fragment.value == pytest.approx(11.0)
        assert fragment.witness.vertices == frozenset({2})
        assert cheeger_ratio(z_window_16, [2, 3, 4, 5, 6], "h") == pytest.approx(219 / 5)
        assert fragment.value == pytest.approx(_brute_force(z_window_16, omega, "h"))

    def test_two_sided_omega(self, z_window_16):
        """Separate path components are each searched."""
        omega = [-6, -5, -4, 4, 5, 6]
        for variant in ("h", "h-tilde"):
            fragment = cheeger_exact(z_window_16, omega, variant)
            assert fragment.value == pytest.approx(_brute_force(z_window_16, omega, variant))

    def test_corpus_matches_enumeration(self, circulation_corpus):
        """Subset enumeration agrees with brute force on small corpus graphs."""
        for graph in circulation_corpus[:6]:
            omega = graph.vertices[:-2]
            for variant in ("h", "h-tilde"):
                fragment = cheeger_exact(graph, omega, variant)
                assert fragment.value == pytest.approx(_brute_force(graph, omega, variant))
                assert cheeger_ratio(graph, fragment.witness, variant) == pytest.approx(fragment.value)

    def test_boundary_omega_rejected(self, z_window_16):
        """Ω must be interior."""
        with pytest.raises(BoundarySupportError):
            cheeger_exact(z_window_16, [14, 15, 16])

    def test_large_component_falls_back(self):
        """Non-path components above the limit need the heuristic."""
        graph = gen_circulation_random(30, seed=4, symmetric_density=0.3, cycle_count=3)
        omega = graph.vertices[:26]
        assert not exact_feasible(graph, omega)
        with pytest.raises(ValueError, match="exact limit"):
            cheeger_exact(graph, omega)
        fragment = cheeger_constant(graph, omega)
        assert fragment.mode == "heuristic"
        assert cheeger_ratio(graph, fragment.witness, "h") == pytest.approx(fragment.value)

    def test_long_path_stays_exact(self, z_window_64):
        """Path components are exact at any size."""
        omega = range(10, 60)
        assert exact_feasible(z_window_64, omega)
        assert cheeger_constant(z_window_64, omega).mode == "exact"


@settings(max_examples=25, deadline=None)
@given(size=st.integers(min_value=3, max_value=8), seed=st.integers(min_value=0, max_value=10_000))
def test_heuristic_bounds_exact(size, seed):
    """The heuristic never beats the exact value and exact equals enumeration."""
    graph = gen_circulation_random(size, seed=seed, symmetric_density=0.3, cycle_count=2)
    omega = graph.vertices[:-1]
    exact = cheeger_exact(graph, omega, "h")
    heuristic = cheeger_heuristic(graph, omega, "h", seed=seed)
    assert exact.value == pytest.approx(_brute_force(graph, omega, "h"))
    assert heuristic.value >= exact.value - 1e-12
    assert heuristic.value == cheeger_heuristic(graph, omega, "h", seed=seed).value


class TestInequality:
    """Test the numerical-range Cheeger chain."""

    def test_three_cycle_pair(self, three_cycle):
        """1/8 <= 1/2 <= 1/2 with M = 1."""
        report = inequality_check(three_cycle, [0, 1])
        assert report.M_omega == 1.0
        assert report.inequality_left == pytest.approx(0.125)
        assert report.inequality_mid == pytest.approx(0.5)
        assert report.inequality_right == pytest.approx(0.5)
        assert report.inequality_holds
        assert report.lambda1 == pytest.approx(0.5)
        assert report.lambda1_bound_holds
        assert report.mode == "exact"

    def test_corpus(self, circulation_corpus):
        """The chain holds on balanced graphs."""
        for graph in circulation_corpus[:10]:
            omega = graph.vertices[: len(graph) // 2]
            report = inequality_check(graph, omega)
            assert report.mode == "exact"
            assert report.inequality_holds
            assert report.lambda1_bound_holds

    def test_report_dict_sorts_witnesses(self, z_window_16):
        """Witness ids are listed in vertex order."""
        payload = inequality_check(z_window_16, [-6, -5, 5, 6]).to_dict()
        assert payload["witness_h"] == sorted(payload["witness_h"])
        assert payload["mode"] == "exact"


class TestCheegerAtInfinity:
    """Test h̃ outside G_n on the integer line."""

    def test_test_set_bounds(self, z_window_64, z_filtration_64):
        """The lighter negative annulus side gives the bound."""
        trend = h_infinity_trend(
            z_window_64, z_filtration_64, [2, 4, 8], envelope=z_line_h_tilde_envelope
        )
        assert trend.test_set_bound[0] == pytest.approx(154 / 142)
        assert trend.test_set_bound[1] == pytest.approx(856 / 1502)
        assert trend.within_envelope
        assert trend.test_set_bound == sorted(trend.test_set_bound, reverse=True)
        for estimate, bound in zip(trend.window_infimum, trend.test_set_bound):
            assert estimate <= bound + 1e-12
        assert trend.fit_exponent < 0

    def test_window_too_small(self, z_window_16):
        """G_{2n} must stay inside the window."""
        filtration = Filtration.hop_balls(z_window_16, 0)
        with pytest.raises(ValueError, match="window too small"):
            h_infinity_trend(z_window_16, filtration, [8])

    def test_power_law_fit(self):
        """Exact power laws are recovered."""
        exponent, prefactor = power_law_fit([1, 2, 4], [3.0, 12.0, 48.0])
        assert exponent == pytest.approx(2.0)
        assert prefactor == pytest.approx(3.0)


class TestAbsCondition:
    """Test the (Abs) table."""

    def test_symmetric_line_not_satisfied(self, symmetric_line):
        """c_n = 1/(k - n)² shrinks on the unit-weight line."""
        filtration = Filtration.hop_balls(symmetric_line, 0)
        schedule = {n: [2 * n, 4 * n] for n in (2, 4, 8)}
        report = abs_condition(symmetric_line, filtration, [2, 4, 8], schedule, threads=2)
        assert report.verdict == "not satisfied"
        for n in (2, 4, 8):
            assert report.c_sequence[n] == pytest.approx(1 / (3 * n) ** 2)
        assert report.cross_check_holds

    def test_z_line_cross_check(self, z_window_64, z_filtration_64):
        """λ₁ >= h²/(8M) on every exact cell."""
        schedule = {n: [2 * n, 4 * n] for n in (1, 2, 4)}
        report = abs_condition(z_window_64, z_filtration_64, [1, 2, 4], schedule, threads=1)
        assert len(report.cells) == 6
        assert all(cell.mode == "exact" for cell in report.cells)
        assert report.cross_check_holds
        assert all(cell.lambda1 >= cell.ratio - 1e-8 for cell in report.cells)

    def test_rejects_bad_schedule(self, z_window_64, z_filtration_64):
        """k must exceed n."""
        with pytest.raises(ValueError, match="k > n"):
            abs_condition(z_window_64, z_filtration_64, [3], {3: [2]})

    def test_verdicts(self):
        """Tail classification of c_n."""
        assert abs_verdict({1: 0.1, 2: 0.2, 3: 0.3}) == "satisfied"
        assert abs_verdict({1: 0.3, 2: 0.2, 3: 0.2}) == "not satisfied"
        assert abs_verdict({1: 0.1, 2: 0.3, 3: 0.2}) == "inconclusive"
        assert abs_verdict({1: 0.1}) == "inconclusive"
