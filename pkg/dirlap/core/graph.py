"""Checks of the standing hypotheses, connectivity, the δ_b distance and cut-off functions."""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Optional

import networkx as nx
import numpy as np

from dirlap.core.models import (
    DirectedWeightedGraph,
    Filtration,
    ValidationReport,
)
from dirlap.core.number_utils import Scalar, Vertex, is_exact

logger = logging.getLogger(__name__)

DEFAULT_BETA_TOLERANCE = 1e-12


class NoChainError(ValueError):
    """Two vertices are not related by a chain of undirected edges."""


def _all_exact(graph: DirectedWeightedGraph) -> bool:
    return all(is_exact(b) for b in graph.weights.values()) and all(
        is_exact(m) for m in graph.measure.values()
    )


def antisymmetry(graph: DirectedWeightedGraph, x: Vertex) -> Scalar:
    """Σ_y |b(x,y) - b(y,x)| over the undirected neighbours of x."""
    return sum(
        (abs(graph.weight(x, y) - graph.weight(y, x)) for y in graph.undirected_neighbors(x)), 0
    )


def gamma_constant(
    graph: DirectedWeightedGraph, vertices: Optional[Iterable[Vertex]] = None
) -> Scalar:
    """Least M with Σ_y |b(x,y) - b(y,x)| <= M·m(x) for every x in ``vertices`` (default: all).

    Exact when every weight and measure is rational.
    """
    exact = _all_exact(graph)
    worst: Scalar = 0
    for x in graph.vertices if vertices is None else vertices:
        if exact:
            ratio: Scalar = Fraction(antisymmetry(graph, x)) / Fraction(graph.measure[x])
        else:
            ratio = float(antisymmetry(graph, x)) / float(graph.measure[x])
        worst = max(worst, ratio)
    return worst


def validate(
    graph: DirectedWeightedGraph, tolerance: float = DEFAULT_BETA_TOLERANCE
) -> ValidationReport:
    """Check outgoing edges, the balance (β) and the antisymmetry bound (γ).

    Exact rational inputs are checked in exact arithmetic; otherwise floating point.
    Window-boundary vertices are left out of the (β) deviation, which only describes
    rows whose whole neighbourhood is present; their deviation is reported separately.

    Args:
        graph: Graph to check
        tolerance: Absolute tolerance on |β⁺(x) - β⁻(x)|

    Returns:
        ValidationReport

    Raises:
        ValueError: If the graph is empty or the tolerance is negative
    """
    if len(graph) == 0:
        raise ValueError("Cannot validate an empty graph")
    if tolerance < 0:
        raise ValueError(f"Tolerance must be nonnegative, got {tolerance}")

    exact = _all_exact(graph)

    beta_deviation: Scalar = 0
    boundary_deviation: Scalar = 0
    max_degree = 0
    without_outgoing = []

    for x in graph.vertices:
        deviation = abs(graph.beta_plus(x) - graph.beta_minus(x))
        if x in graph.window_boundary:
            boundary_deviation = max(boundary_deviation, deviation)
        else:
            beta_deviation = max(beta_deviation, deviation)

        max_degree = max(max_degree, len(graph.undirected_neighbors(x)))
        if not graph.out_neighbors[x]:
            without_outgoing.append(x)

    if without_outgoing:
        logger.warning(
            f"{len(without_outgoing)} vertices have no outgoing edge",
            extra={"vertices": without_outgoing[:10]},
        )

    report = ValidationReport(
        beta_max_deviation=float(beta_deviation),
        gamma_constant=float(gamma_constant(graph)),
        degree_bound=max_degree + 1,
        connectivity_class=connectivity_class(graph),
        outgoing_condition=not without_outgoing,
        self_loop_free=all(x != y for x, y in graph.weights),
        beta_holds=beta_deviation <= tolerance,
        tolerance=tolerance,
        exact_arithmetic=exact,
        boundary_beta_deviation=float(boundary_deviation),
        vertex_count=len(graph),
        edge_count=graph.edge_count,
        vertices_without_outgoing=without_outgoing,
    )
    logger.info(
        f"Validated graph: beta deviation {report.beta_max_deviation:g}, "
        f"gamma {report.gamma_constant:g}, {report.connectivity_class}"
    )
    return report


def to_networkx(graph: DirectedWeightedGraph) -> nx.DiGraph:
    """Directed networkx view with float ``weight`` attributes."""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.vertices)
    digraph.add_weighted_edges_from((x, y, float(b)) for x, y, b in graph.edges())
    return digraph


def _is_unilateral(digraph: nx.DiGraph) -> bool:
    """Every pair joined by a directed path in at least one direction.

    Holds iff the condensation DAG has a Hamiltonian path, i.e. consecutive
    components in topological order are adjacent.
    """
    condensed = nx.condensation(digraph)
    order = list(nx.topological_sort(condensed))
    return all(condensed.has_edge(a, b) for a, b in zip(order, order[1:]))


def connectivity_class(graph: DirectedWeightedGraph) -> str:
    """Strongest connectedness notion that holds.

    Returns:
        One of "strongly-connected", "connected" (every pair related by a path in at
        least one direction), "weakly-connected", "disconnected"

    Raises:
        ValueError: If the graph is empty
    """
    if len(graph) == 0:
        raise ValueError("Connectivity of an empty graph is undefined")

    digraph = to_networkx(graph)
    if not nx.is_weakly_connected(digraph):
        return "disconnected"
    if nx.is_strongly_connected(digraph):
        return "strongly-connected"
    if _is_unilateral(digraph):
        return "connected"
    return "weakly-connected"


def delta_b_length(graph: DirectedWeightedGraph, x: Vertex, y: Vertex) -> float:
    """Length √(m(x)m(y)) / √(b(x,y) + b(y,x)) of the undirected edge {x, y}."""
    symmetric = float(graph.weight(x, y) + graph.weight(y, x))
    return math.sqrt(float(graph.measure[x]) * float(graph.measure[y])) / math.sqrt(symmetric)


def delta_b_graph(graph: DirectedWeightedGraph) -> nx.Graph:
    """Undirected networkx graph whose ``length`` attributes are δ_b edge lengths."""
    undirected = nx.Graph()
    undirected.add_nodes_from(graph.vertices)
    for x, y, _ in graph.edges():
        if not undirected.has_edge(x, y):
            undirected.add_edge(x, y, length=delta_b_length(graph, x, y))
    return undirected


def delta_b_distance(graph: DirectedWeightedGraph, x: Vertex, y: Vertex) -> float:
    """The b-weighted chain distance δ_b(x, y).

    Raises:
        NoChainError: If x and y lie in different weakly connected components
        ValueError: If either vertex is not in the graph
    """
    for vertex in (x, y):
        if vertex not in graph:
            raise ValueError(f"Vertex {vertex!r} not in graph")
    if x == y:
        return 0.0
    try:
        return float(nx.dijkstra_path_length(delta_b_graph(graph), x, y, weight="length"))
    except nx.NetworkXNoPath as e:
        raise NoChainError(f"no chain between {x!r} and {y!r}") from e


def distance_to_set(
    graph: DirectedWeightedGraph, sources: Iterable[Vertex], cutoff: Optional[float] = None
) -> dict[Vertex, float]:
    """δ_b distance from every reachable vertex to the nearest source."""
    return dict(
        nx.multi_source_dijkstra_path_length(
            delta_b_graph(graph), set(sources), cutoff=cutoff, weight="length"
        )
    )


def chi_energy(graph: DirectedWeightedGraph, chi: dict[Vertex, float]) -> float:
    """max_x (1/m(x)) Σ_{(x,y) ∈ E} (b(x,y) + b(y,x)) |χ(x) - χ(y)|²."""
    worst = 0.0
    for x in graph.vertices:
        total = sum(
            float(graph.weight(x, y) + graph.weight(y, x)) * (chi[x] - chi[y]) ** 2
            for y in graph.out_neighbors[x]
        )
        worst = max(worst, total / float(graph.measure[x]))
    return worst


def chi_cutoffs(
    graph: DirectedWeightedGraph, filtration: Filtration, radius_profile: Sequence[float]
) -> tuple[list[dict[Vertex, float]], list[float]]:
    """Clamped-linear cut-offs χ_n(x) = clamp(1 - δ_b(x, G_n)/R_n, 0, 1) and their constants C_n.

    The constants are evidence only: a bounded C_n on a window does not certify
    χ-completeness of an infinite graph.

    Args:
        graph: Graph the filtration lives on
        filtration: Levels G_n; one cut-off is built per entry of radius_profile
        radius_profile: Positive radii R_0, R_1, ...

    Returns:
        (cut-off functions, per-n constants C_n)
    """
    if len(radius_profile) > len(filtration):
        raise ValueError(
            f"radius_profile has {len(radius_profile)} entries but the filtration only "
            f"{len(filtration)} levels"
        )

    cutoffs: list[dict[Vertex, float]] = []
    constants: list[float] = []
    for n, radius in enumerate(radius_profile):
        if radius <= 0:
            raise ValueError(f"radius_profile[{n}] must be positive, got {radius}")
        distances = distance_to_set(graph, filtration.level(n).vertices)
        chi = {
            x: float(np.clip(1.0 - distances.get(x, math.inf) / radius, 0.0, 1.0))
            for x in graph.vertices
        }
        cutoffs.append(chi)
        constants.append(chi_energy(graph, chi))
        logger.debug(f"chi cut-off n={n}: C_n = {constants[-1]:g}")
    return cutoffs, constants


@dataclass
class SelfAdjointnessReport:
    """Advisory evidence for essential self-adjointness of the symmetric Laplacian.

    None of the three criteria can be decided on a finite window; the report only says
    which one the window data points to.
    """

    measure_constant: bool
    degree_bound: int
    delta_b_reach: list[float]
    reach_trend: str
    chi_constants: list[float]
    chi_trend: str
    applicable_criterion: Optional[str]
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _reach_trend(values: Sequence[float]) -> str:
    if len(values) < 3:
        return "inconclusive"
    steps = np.diff(values)
    if np.any(steps <= 0):
        return "saturating"
    # Steps that shrink geometrically sum to a finite total distance
    if steps[-1] >= 0.5 * steps[0]:
        return "growing"
    return "saturating"


def _bounded_trend(values: Sequence[float]) -> str:
    if len(values) < 3:
        return "inconclusive"
    tail = values[len(values) // 2 :]
    if max(tail) <= 2.0 * max(values[: len(values) // 2] or [tail[0]]):
        return "bounded"
    return "growing"


def self_adjointness_report(
    graph: DirectedWeightedGraph,
    filtration: Filtration,
    radius_profile: Optional[Sequence[float]] = None,
    root: Optional[Vertex] = None,
) -> SelfAdjointnessReport:
    """Evaluate the three essential self-adjointness criteria on a window.

    (a) constant measure; (b) bounded degree together with δ_b balls growing without
    bound; (c) bounded χ cut-off constants.
    """
    masses = {float(m) for m in graph.measure.values()}
    measure_constant = len(masses) == 1
    degree_bound = max(len(graph.undirected_neighbors(x)) for x in graph.vertices) + 1

    if root is None:
        root = next(iter(filtration.level(0)))
    distances = distance_to_set(graph, [root])
    reach = []
    for n in range(len(filtration) - 1):
        outside = filtration.complement(n).vertices
        reach.append(min(distances[x] for x in outside))
    reach_trend = _reach_trend(reach)

    if radius_profile is None:
        radius_profile = [float(n + 1) for n in range(len(filtration) - 1)]
    _, constants = chi_cutoffs(graph, filtration, radius_profile)
    chi_trend = _bounded_trend(constants)

    notes = []
    if measure_constant:
        criterion: Optional[str] = "constant-measure"
    elif reach_trend == "growing":
        criterion = "bounded-degree-complete"
    elif chi_trend == "bounded":
        criterion = "chi-complete"
    else:
        criterion = None
        notes.append("no criterion is supported by the window data")
    if reach_trend == "saturating":
        notes.append("δ_b reach saturates: the δ_b metric looks incomplete")

    return SelfAdjointnessReport(
        measure_constant=measure_constant,
        degree_bound=degree_bound,
        delta_b_reach=reach,
        reach_trend=reach_trend,
        chi_constants=constants,
        chi_trend=chi_trend,
        applicable_criterion=criterion,
        notes=notes,
    )

