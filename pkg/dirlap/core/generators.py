"""Graph windows satisfying Assumption (β) exactly.

All generators produce exact rational weights so that (β) can be verified without
rounding; operators convert to floating point when they are assembled.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dirlap.core.graph_io import load_graph
from dirlap.core.models import DirectedWeightedGraph, Filtration
from dirlap.core.number_utils import Vertex

logger = logging.getLogger(__name__)

GeneratorKind = Literal[
    "z-line",
    "symmetric-line",
    "directed-cycle",
    "symmetric-random",
    "circulation-random",
    "file",
]

MAX_RESAMPLES = 200
RATIONAL_GRID = 64


class GeneratorSpec(BaseModel):
    """Parameters of a generated (or loaded) graph window.

    The same spec always yields the identical graph.
    """

    model_config = ConfigDict(frozen=True)

    kind: GeneratorKind
    radius: int = Field(default=8, ge=1)
    size: int = Field(default=12, ge=2)
    seed: int = 0
    forward_weight: float = Field(default=1.0, gt=0)
    backward_weight: float = Field(default=0.0, ge=0)
    symmetric_density: float = Field(default=0.3, ge=0, le=1)
    cycle_count: int = Field(default=3, ge=0)
    weight_range: tuple[float, float] = (0.5, 2.0)
    path: Optional[Path] = None

    @model_validator(mode="after")
    def _check_consistency(self) -> "GeneratorSpec":
        low, high = self.weight_range
        if not 0 < low <= high:
            raise ValueError(f"weight_range must satisfy 0 < low <= high, got {self.weight_range}")
        if self.kind == "file" and self.path is None:
            raise ValueError("kind 'file' requires a path")
        if self.kind == "directed-cycle" and self.size < 3:
            raise ValueError("a directed cycle needs size >= 3")
        return self


def z_line_forward(l: int) -> Fraction:
    """b(l, l+1) = (|l|³ + 1)/2 + 1/4."""
    return Fraction(abs(l) ** 3 + 1, 2) + Fraction(1, 4)


def z_line_backward(l: int) -> Fraction:
    """b(l+1, l) = (|l|³ + 1)/2 - 1/4."""
    return Fraction(abs(l) ** 3 + 1, 2) - Fraction(1, 4)


def gen_z_line(radius: int) -> DirectedWeightedGraph:
    """The integer line window {-radius, ..., radius} with cubic, slightly asymmetric weights.

    m ≡ 1. The end vertices are window-boundary vertices: their outer edges are cut off.

    Raises:
        ValueError: If radius < 1
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")

    measure = {l: Fraction(1) for l in range(-radius, radius + 1)}
    weights: dict[tuple[Vertex, Vertex], Fraction] = {}
    for l in range(-radius, radius):
        weights[(l, l + 1)] = z_line_forward(l)
        weights[(l + 1, l)] = z_line_backward(l)

    return DirectedWeightedGraph.from_edges(measure, weights, window_boundary=(-radius, radius))


def gen_symmetric_line(radius: int, weight: Fraction = Fraction(1)) -> DirectedWeightedGraph:
    """Two-sided path {-radius, ..., radius} with b ≡ weight in both directions and m ≡ 1."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    weight = Fraction(weight)
    if weight <= 0:
        raise ValueError(f"weight must be positive, got {weight}")

    measure = {l: Fraction(1) for l in range(-radius, radius + 1)}
    weights: dict[tuple[Vertex, Vertex], Fraction] = {}
    for l in range(-radius, radius):
        weights[(l, l + 1)] = weight
        weights[(l + 1, l)] = weight
    return DirectedWeightedGraph.from_edges(measure, weights, window_boundary=(-radius, radius))


def gen_directed_cycle(
    n: int, forward_weight: float = 1.0, backward_weight: float = 0.0
) -> DirectedWeightedGraph:
    """Cycle on 0..n-1 with b(i, i+1) = forward_weight and b(i+1, i) = backward_weight.

    A zero backward weight omits the backward edges. m ≡ 1.

    Raises:
        ValueError: If n < 3 or a weight is out of range
    """
    if n < 3:
        raise ValueError(f"A directed cycle needs n >= 3, got {n}")
    forward = Fraction(forward_weight)
    backward = Fraction(backward_weight)
    if forward <= 0 or backward < 0:
        raise ValueError("forward_weight must be positive and backward_weight nonnegative")

    measure = {i: Fraction(1) for i in range(n)}
    weights: dict[tuple[Vertex, Vertex], Fraction] = {}
    for i in range(n):
        weights[(i, (i + 1) % n)] = forward
        if backward > 0:
            weights[((i + 1) % n, i)] = backward
    return DirectedWeightedGraph.from_edges(measure, weights)


def _random_rational(rng: np.random.Generator, low: Fraction, high: Fraction) -> Fraction:
    step = int(rng.integers(0, RATIONAL_GRID + 1))
    return low + (high - low) * Fraction(step, RATIONAL_GRID)


def gen_circulation_random(
    size: int,
    seed: int = 0,
    symmetric_density: float = 0.3,
    cycle_count: int = 3,
    weight_range: tuple[float, float] = (0.5, 2.0),
) -> DirectedWeightedGraph:
    """Random weakly connected graph satisfying (β) exactly.

    A symmetric base (each sampled undirected edge carries the same weight both ways)
    plus ``cycle_count`` random directed simple cycles, each adding a random weight
    along its orientation. Every cycle is divergence-free, so in-weight equals
    out-weight at each vertex.

    Raises:
        ValueError: If size < 2 or no connected sample is found after MAX_RESAMPLES tries
    """
    if size < 2:
        raise ValueError(f"size must be >= 2, got {size}")
    low = Fraction(weight_range[0]).limit_denominator(10**6)
    high = Fraction(weight_range[1]).limit_denominator(10**6)
    if not 0 < low <= high:
        raise ValueError(f"weight_range must satisfy 0 < low <= high, got {weight_range}")

    rng = np.random.default_rng(seed)
    for attempt in range(MAX_RESAMPLES):
        weights: dict[tuple[Vertex, Vertex], Fraction] = {}

        for i in range(size):
            for j in range(i + 1, size):
                if rng.random() < symmetric_density:
                    w = _random_rational(rng, low, high)
                    weights[(i, j)] = weights.get((i, j), Fraction(0)) + w
                    weights[(j, i)] = weights.get((j, i), Fraction(0)) + w

        for _ in range(cycle_count):
            length = int(rng.integers(min(3, size), size + 1))
            cycle = [int(v) for v in rng.choice(size, size=length, replace=False)]
            w = _random_rational(rng, low, high)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                weights[(a, b)] = weights.get((a, b), Fraction(0)) + w

        measure = {i: _random_rational(rng, low, high) for i in range(size)}
        graph = DirectedWeightedGraph.from_edges(measure, weights)
        if graph.all_vertices().is_weakly_connected():
            logger.debug(f"Circulation graph seed={seed} connected after {attempt + 1} samples")
            return graph

    raise ValueError(
        f"Could not sample a weakly connected graph (size={size}, seed={seed}, "
        f"density={symmetric_density}, cycles={cycle_count}) in {MAX_RESAMPLES} tries"
    )


def build_graph(spec: GeneratorSpec) -> DirectedWeightedGraph:
    """Construct the graph described by a GeneratorSpec."""
    if spec.kind == "z-line":
        return gen_z_line(spec.radius)
    if spec.kind == "symmetric-line":
        return gen_symmetric_line(spec.radius)
    if spec.kind == "directed-cycle":
        return gen_directed_cycle(spec.size, spec.forward_weight, spec.backward_weight)
    if spec.kind in ("symmetric-random", "circulation-random"):
        return gen_circulation_random(
            spec.size,
            seed=spec.seed,
            symmetric_density=spec.symmetric_density,
            cycle_count=0 if spec.kind == "symmetric-random" else spec.cycle_count,
            weight_range=spec.weight_range,
        )
    assert spec.path is not None
    return load_graph(spec.path)


def default_root(graph: DirectedWeightedGraph) -> Vertex:
    """Filtration root: 0 when it is a vertex (the integer line), else the first vertex."""
    if 0 in graph:
        return 0
    return graph.vertices[0]


def build_window(spec: GeneratorSpec) -> tuple[DirectedWeightedGraph, Filtration]:
    """Graph plus its hop-ball filtration around default_root."""
    graph = build_graph(spec)
    return graph, Filtration.hop_balls(graph, default_root(graph))


def z_line_h_tilde_envelope(n: int) -> float:
    """Upper envelope 2(n³ + (2n+1)³) / ((n+1)(n³ + (n+1)³)) for h̃ on the complement of G_n."""
    return 2 * (n**3 + (2 * n + 1) ** 3) / ((n + 1) * (n**3 + (n + 1) ** 3))
