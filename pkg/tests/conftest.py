"""Pytest configuration and common fixtures."""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from dirlap.core.generators import (
    gen_circulation_random,
    gen_directed_cycle,
    gen_symmetric_line,
    gen_z_line,
)
from dirlap.core.models import DirectedWeightedGraph, Filtration

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "dirlap" / "schemas"


def same_values(first, second, tolerance: float) -> bool:
    """Each value of one list lies within tolerance of some value of the other."""
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)
    if first.shape != second.shape:
        return False
    gaps = np.abs(first[:, None] - second[None, :])
    return bool(gaps.min(axis=1).max() <= tolerance and gaps.min(axis=0).max() <= tolerance)


@pytest.fixture
def three_cycle() -> DirectedWeightedGraph:
    """Directed 3-cycle 0 -> 1 -> 2 -> 0 with b ≡ 1 and m ≡ 1."""
    return gen_directed_cycle(3)


@pytest.fixture
def z_window_16() -> DirectedWeightedGraph:
    """Integer-line window of radius 16."""
    return gen_z_line(16)


@pytest.fixture(scope="session")
def z_window_64() -> DirectedWeightedGraph:
    """Integer-line window of radius 64 (shared; graphs are immutable)."""
    return gen_z_line(64)


@pytest.fixture(scope="session")
def z_filtration_64(z_window_64: DirectedWeightedGraph) -> Filtration:
    """Hop balls G_n = {-n..n} on the radius-64 window."""
    return Filtration.hop_balls(z_window_64, 0)


@pytest.fixture
def symmetric_line() -> DirectedWeightedGraph:
    """Symmetric two-sided path of radius 40 with b ≡ 1."""
    return gen_symmetric_line(40)


@pytest.fixture(scope="session")
def circulation_corpus() -> list[DirectedWeightedGraph]:
    """Twenty seeded circulation-random graphs of 6 to 25 vertices."""
    return [
        gen_circulation_random(6 + seed % 20, seed=seed, symmetric_density=0.25, cycle_count=4)
        for seed in range(20)
    ]


@pytest.fixture(scope="session")
def acceptance_corpus() -> list[DirectedWeightedGraph]:
    """One hundred seeded circulation-random graphs of 6 to 50 vertices."""
    return [
        gen_circulation_random(6 + seed % 45, seed=seed, symmetric_density=0.2, cycle_count=4)
        for seed in range(100)
    ]


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for random test vectors."""
    return np.random.default_rng(12345)


@pytest.fixture
def beta_violating_graph() -> DirectedWeightedGraph:
    """Path 0 -> 1 -> 2 with one reverse edge: in-weight differs from out-weight."""
    return DirectedWeightedGraph.from_edges(
        measure={0: Fraction(1), 1: Fraction(1), 2: Fraction(1)},
        weights={(0, 1): Fraction(1), (1, 2): Fraction(1), (2, 1): Fraction(1, 2)},
    )


@pytest.fixture
def graph_file(tmp_path: Path) -> Path:
    """Small graph file with string ids, a rational weight and a window-boundary line."""
    path = tmp_path / "graph.txt"
    path.write_text(
        "graph v2\n"
        "# a two-vertex circulation\n"
        'v "a" 1\n'
        'v "b" 3/2\n'
        'e "a" "b" 0.25\n'
        'e "b" "a" 1/4\n'
        'w "b"\n',
        encoding="utf-8",
    )
    return path
