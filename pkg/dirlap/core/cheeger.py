"""Isoperimetric (Cheeger) constants h and h̃ on vertex subsets.

    h(Ω) = inf_U b(∂_E U) / m(U)        h̃(Ω) = inf_U b(∂_E U) / β⁺(U)

over non-empty U ⊆ Ω, where b(∂_E U) sums b over directed edges with exactly one
endpoint in U. Both numerator and denominators are additive over pieces of U that
share no edge, and a mediant is never below its smallest term, so the infimum is
attained on a connected U. Exact mode uses that: components that induce simple paths
are solved by interval enumeration, other components by subset enumeration.
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Optional

import numpy as np
from scipy import linalg

from dirlap.core.models import DirectedWeightedGraph, Filtration, VertexSubset, ensure_subset
from dirlap.core.number_utils import Vertex
from dirlap.core.operators import BoundarySupportError, assemble
from dirlap.core.spectra import lambda1_symmetric, nu, threads_from_env

logger = logging.getLogger(__name__)

EXACT_CHEEGER_LIMIT = 22
ENUMERATION_BLOCK = 1 << 16
INEQUALITY_TOLERANCE = 1e-8
DEFAULT_RESTARTS = 8

Variant = Literal["h", "h-tilde"]
Mode = Literal["exact", "heuristic"]


@dataclass
class CheegerFragment:
    """One Cheeger constant with the subset that attains (or best approximates) it."""

    value: float
    witness: VertexSubset
    variant: Variant
    mode: Mode

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "witness": self.witness.sorted_ids(),
            "variant": self.variant,
            "mode": self.mode,
        }


@dataclass
class CheegerReport:
    """h, h̃ and the chain h²/8 <= M_Ω ν(Δ^D_Ω) <= M_Ω h/2 on one subset."""

    h_value: float
    h_tilde_value: float
    witness_h: VertexSubset
    witness_h_tilde: VertexSubset
    M_omega: float
    mode: Mode
    inequality_left: float
    inequality_mid: float
    inequality_right: float
    inequality_holds: bool
    lambda1: float = math.nan
    lambda1_bound_holds: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "h_value": self.h_value,
            "h_tilde_value": self.h_tilde_value,
            "witness_h": self.witness_h.sorted_ids(),
            "witness_h_tilde": self.witness_h_tilde.sorted_ids(),
            "M_omega": self.M_omega,
            "mode": self.mode,
            "inequality_left": self.inequality_left,
            "inequality_mid": self.inequality_mid,
            "inequality_right": self.inequality_right,
            "inequality_holds": self.inequality_holds,
            "lambda1": self.lambda1,
            "lambda1_bound_holds": self.lambda1_bound_holds,
        }


def boundary_weight(graph: DirectedWeightedGraph, subset: Iterable[Vertex]) -> float:
    """b(∂_E U): total weight of directed edges with exactly one endpoint in U.

    A U that touches the window boundary is accepted with a warning: edges cut
    off by the window are missing from the sum.
    """
    members = ensure_subset(graph, subset)
    if members.touches_window_boundary():
        logger.warning("Boundary weight of a set touching the window boundary undercounts")
    total = 0.0
    for x, y, weight in graph.edges():
        if (x in members) != (y in members):
            total += float(weight)
    return total


def M_sup(graph: DirectedWeightedGraph, omega: Iterable[Vertex]) -> float:
    """M_Ω = max over x ∈ Ω of β⁺(x)/m(x)."""
    members = ensure_subset(graph, omega)
    if len(members) == 0:
        raise ValueError("M_sup needs a non-empty subset")
    return max(float(graph.beta_plus(x)) / float(graph.measure[x]) for x in members)


def _denominator(graph: DirectedWeightedGraph, x: Vertex, variant: Variant) -> float:
    if variant == "h":
        return float(graph.measure[x])
    if variant == "h-tilde":
        return float(graph.beta_plus(x))
    raise ValueError(f"Unknown Cheeger variant {variant!r}")


def _pair_weight(graph: DirectedWeightedGraph, x: Vertex, y: Vertex) -> float:
    return float(graph.weight(x, y) + graph.weight(y, x))


def _total_degree(graph: DirectedWeightedGraph, x: Vertex) -> float:
    return float(graph.beta_plus(x) + graph.beta_minus(x))


def cheeger_ratio(graph: DirectedWeightedGraph, subset: Iterable[Vertex], variant: Variant) -> float:
    """b(∂_E U) divided by m(U) or β⁺(U)."""
    members = ensure_subset(graph, subset)
    if len(members) == 0:
        raise ValueError("Cheeger ratio of an empty set is undefined")
    return boundary_weight(graph, members) / sum(_denominator(graph, x, variant) for x in members)


def _components(omega: VertexSubset) -> list[VertexSubset]:
    graph = omega.parent
    remaining = set(omega.vertices)
    pieces = []
    for start in omega.ordered():
        if start not in remaining:
            continue
        piece = {start}
        stack = [start]
        remaining.discard(start)
        while stack:
            x = stack.pop()
            for y in graph.undirected_neighbors(x):
                if y in remaining:
                    remaining.discard(y)
                    piece.add(y)
                    stack.append(y)
        pieces.append(graph.subset(piece))
    return pieces


def _path_order(component: VertexSubset) -> Optional[list[Vertex]]:
    """Vertices in path order when the component induces a simple path, else None."""
    graph = component.parent
    inner_degree = {
        x: sum(1 for y in graph.undirected_neighbors(x) if y in component) for x in component
    }
    if len(component) == 1:
        return list(component)
    if any(d > 2 for d in inner_degree.values()):
        return None
    ends = [x for x in component.ordered() if inner_degree[x] == 1]
    if len(ends) != 2:
        return None  # a cycle

    order = [ends[0]]
    previous: Optional[Vertex] = None
    while len(order) < len(component):
        current = order[-1]
        step = [y for y in graph.undirected_neighbors(current) if y in component and y != previous]
        previous = current
        order.append(step[0])
    return order


def _interval_minimum(
    graph: DirectedWeightedGraph, order: list[Vertex], variant: Variant
) -> tuple[float, list[Vertex]]:
    """Best interval of a path: boundary(i..j) = Σ degrees - 2 Σ internal pair weights."""
    size = len(order)
    degrees = np.array([_total_degree(graph, x) for x in order])
    denominators = np.array([_denominator(graph, x, variant) for x in order])
    links = np.array([_pair_weight(graph, a, b) for a, b in zip(order, order[1:])])

    degree_prefix = np.concatenate(([0.0], np.cumsum(degrees)))
    denominator_prefix = np.concatenate(([0.0], np.cumsum(denominators)))
    link_prefix = np.concatenate(([0.0], np.cumsum(links)))

    best_value = math.inf
    best = (0, 0)
    for i in range(size):
        j = np.arange(i, size)
        boundary = degree_prefix[j + 1] - degree_prefix[i] - 2 * (link_prefix[j] - link_prefix[i])
        ratios = boundary / (denominator_prefix[j + 1] - denominator_prefix[i])
        position = int(np.argmin(ratios))
        if ratios[position] < best_value:
            best_value = float(ratios[position])
            best = (i, i + position)
    return best_value, order[best[0] : best[1] + 1]


def _enumeration_minimum(
    graph: DirectedWeightedGraph, component: VertexSubset, variant: Variant
) -> tuple[float, list[Vertex]]:
    """All 2^n - 1 non-empty subsets, vectorized in blocks; ties go to the smallest mask."""
    order = list(component.ordered())
    size = len(order)
    degrees = np.array([_total_degree(graph, x) for x in order])
    denominators = np.array([_denominator(graph, x, variant) for x in order])
    pair = np.array([[_pair_weight(graph, x, y) for y in order] for x in order])
    bit_positions = np.arange(size, dtype=np.int64)

    best_value = math.inf
    best_mask = 0
    total = 1 << size
    for start in range(1, total, ENUMERATION_BLOCK):
        masks = np.arange(start, min(start + ENUMERATION_BLOCK, total), dtype=np.int64)
        bits = ((masks[:, None] >> bit_positions) & 1).astype(float)
        internal = ((bits @ pair) * bits).sum(axis=1)
        ratios = (bits @ degrees - internal) / (bits @ denominators)
        position = int(np.argmin(ratios))
        if ratios[position] < best_value:
            best_value = float(ratios[position])
            best_mask = int(masks[position])

    return best_value, [x for bit, x in enumerate(order) if best_mask >> bit & 1]


def _interior_omega(graph: DirectedWeightedGraph, omega: Iterable[Vertex]) -> VertexSubset:
    members = ensure_subset(graph, omega)
    if len(members) == 0:
        raise ValueError("Cheeger constants need a non-empty subset")
    if members.touches_window_boundary():
        raise BoundarySupportError("Ω must lie in the window interior")
    return members


def exact_feasible(graph: DirectedWeightedGraph, omega: Iterable[Vertex]) -> bool:
    """Every component is a simple path or has at most EXACT_CHEEGER_LIMIT vertices."""
    members = ensure_subset(graph, omega)
    return all(
        len(piece) <= EXACT_CHEEGER_LIMIT or _path_order(piece) is not None
        for piece in _components(members)
    )


def cheeger_exact(
    graph: DirectedWeightedGraph, omega: Iterable[Vertex], variant: Variant = "h"
) -> CheegerFragment:
    """Exact infimum with a witness.

    Raises:
        ValueError: If Ω is empty, or a component that is not a path exceeds
            EXACT_CHEEGER_LIMIT vertices (use cheeger_heuristic)
        BoundarySupportError: If Ω touches the window boundary
    """
    members = _interior_omega(graph, omega)

    best_value = math.inf
    best_witness: list[Vertex] = []
    for piece in _components(members):
        order = _path_order(piece)
        if order is not None:
            value, witness = _interval_minimum(graph, order, variant)
        elif len(piece) <= EXACT_CHEEGER_LIMIT:
            value, witness = _enumeration_minimum(graph, piece, variant)
        else:
            raise ValueError(
                f"Component of {len(piece)} vertices exceeds the exact limit "
                f"{EXACT_CHEEGER_LIMIT}; use cheeger_heuristic"
            )
        if value < best_value:
            best_value, best_witness = value, witness

    logger.debug(f"Exact {variant} on {len(members)} vertices: {best_value:.6g}")
    return CheegerFragment(
        value=best_value, witness=graph.subset(best_witness), variant=variant, mode="exact"
    )


class _LocalSearch:
    """Incremental boundary and denominator bookkeeping for single-vertex moves."""

    def __init__(self, graph: DirectedWeightedGraph, component: VertexSubset, variant: Variant):
        self.graph = graph
        self.vertices = list(component.ordered())
        self.members = component.vertices
        self.degree = {x: _total_degree(graph, x) for x in self.vertices}
        self.denominator = {x: _denominator(graph, x, variant) for x in self.vertices}
        self.links = {
            x: {y: _pair_weight(graph, x, y) for y in graph.undirected_neighbors(x) if y in self.members}
            for x in self.vertices
        }

    def ratio(self, chosen: set[Vertex]) -> float:
        boundary = sum(self.degree[x] for x in chosen) - sum(
            w for x in chosen for y, w in self.links[x].items() if y in chosen
        )
        return boundary / sum(self.denominator[x] for x in chosen)

    def improve(self, chosen: set[Vertex]) -> tuple[float, set[Vertex]]:
        chosen = set(chosen)
        boundary = sum(self.degree[x] for x in chosen) - sum(
            w for x in chosen for y, w in self.links[x].items() if y in chosen
        )
        mass = sum(self.denominator[x] for x in chosen)
        current = boundary / mass

        while True:
            best_move: Optional[tuple[Vertex, float, float]] = None
            best_ratio = current
            for x in self.vertices:
                shared = sum(w for y, w in self.links[x].items() if y in chosen and y != x)
                if x in chosen:
                    if len(chosen) == 1:
                        continue
                    new_boundary = boundary - self.degree[x] + 2 * shared
                    new_mass = mass - self.denominator[x]
                else:
                    new_boundary = boundary + self.degree[x] - 2 * shared
                    new_mass = mass + self.denominator[x]
                candidate = new_boundary / new_mass
                if candidate < best_ratio - 1e-15 * max(1.0, abs(best_ratio)):
                    best_ratio = candidate
                    best_move = (x, new_boundary, new_mass)
            if best_move is None:
                return current, chosen
            x, boundary, mass = best_move
            chosen.symmetric_difference_update({x})
            current = best_ratio


def _sweep_orders(graph: DirectedWeightedGraph, component: VertexSubset) -> list[list[Vertex]]:
    """Vertex orders from the two lowest eigenvectors of S̃^D on the component."""
    if len(component) < 2:
        return []
    op = assemble(graph, component, which="S")
    tilde = op.symmetrized()
    dense = tilde.toarray() if op.is_sparse else np.asarray(tilde)
    count = min(2, op.dimension)
    _, vectors = linalg.eigh(dense, subset_by_index=[0, count - 1])
    orders = []
    for column in range(count):
        scaled = vectors[:, column] / np.sqrt(op.measure)
        ranking = np.argsort(scaled, kind="stable")
        order = [op.vertices[i] for i in ranking]
        orders.extend([order, order[::-1]])
    return orders


def cheeger_heuristic(
    graph: DirectedWeightedGraph,
    omega: Iterable[Vertex],
    variant: Variant = "h",
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> CheegerFragment:
    """Upper bound from sweep cuts, singletons and greedy vertex moves.

    Deterministic for a given seed. Evaluated per component; the minimum is kept.
    """
    members = _interior_omega(graph, omega)
    rng = np.random.default_rng(seed)

    best_value = math.inf
    best_witness: set[Vertex] = set()
    for piece in _components(members):
        search = _LocalSearch(graph, piece, variant)
        candidates: list[set[Vertex]] = [{x} for x in search.vertices]
        candidates.append(set(search.vertices))
        for order in _sweep_orders(graph, piece):
            prefix: set[Vertex] = set()
            for x in order[:-1]:
                prefix.add(x)
                candidates.append(set(prefix))

        scored = sorted(
            ((search.ratio(c), sorted(search.vertices.index(x) for x in c), c) for c in candidates),
            key=lambda item: (item[0], item[1]),
        )
        starts = [scored[0][2]]
        for _ in range(restarts):
            size = int(rng.integers(1, len(search.vertices) + 1))
            picks = rng.choice(len(search.vertices), size=size, replace=False)
            starts.append({search.vertices[int(i)] for i in picks})

        piece_value, piece_witness = scored[0][0], scored[0][2]
        for start in starts:
            value, witness = search.improve(start)
            if value < piece_value:
                piece_value, piece_witness = value, witness

        if piece_value < best_value:
            best_value, best_witness = piece_value, piece_witness

    logger.debug(f"Heuristic {variant} on {len(members)} vertices: {best_value:.6g}")
    return CheegerFragment(
        value=best_value, witness=graph.subset(best_witness), variant=variant, mode="heuristic"
    )


def cheeger_constant(
    graph: DirectedWeightedGraph,
    omega: Iterable[Vertex],
    variant: Variant = "h",
    seed: int = 0,
) -> CheegerFragment:
    """Exact when feasible, heuristic otherwise."""
    members = _interior_omega(graph, omega)
    if exact_feasible(graph, members):
        return cheeger_exact(graph, members, variant)
    logger.info(f"Exact {variant} infeasible on {len(members)} vertices; using the heuristic")
    return cheeger_heuristic(graph, members, variant, seed=seed)


def inequality_check(
    graph: DirectedWeightedGraph, omega: Iterable[Vertex], seed: int = 0
) -> CheegerReport:
    """h²/8 <= M_Ω ν(Δ^D_Ω) <= M_Ω h/2, and M_Ω λ₁(S^D_Ω) >= h²/8.

    With heuristic h the chain is reported but only the right-hand inequality is
    guaranteed.
    """
    members = _interior_omega(graph, omega)
    h = cheeger_constant(graph, members, "h", seed=seed)
    h_tilde = cheeger_constant(graph, members, "h-tilde", seed=seed)
    mode: Mode = "exact" if h.mode == "exact" and h_tilde.mode == "exact" else "heuristic"

    bound = M_sup(graph, members)
    real_floor = nu(assemble(graph, members, which="delta"))
    lam = lambda1_symmetric(assemble(graph, members, which="S"))

    left = h.value**2 / 8
    mid = bound * real_floor
    right = bound * h.value / 2
    holds = left <= mid + INEQUALITY_TOLERANCE and mid <= right + INEQUALITY_TOLERANCE

    report = CheegerReport(
        h_value=h.value,
        h_tilde_value=h_tilde.value,
        witness_h=h.witness,
        witness_h_tilde=h_tilde.witness,
        M_omega=bound,
        mode=mode,
        inequality_left=left,
        inequality_mid=mid,
        inequality_right=right,
        inequality_holds=holds,
        lambda1=lam,
        lambda1_bound_holds=bound * lam >= left - INEQUALITY_TOLERANCE,
    )
    if not holds and mode == "exact":
        logger.warning(
            f"Cheeger chain fails on {len(members)} vertices: {left:.6g} <= {mid:.6g} <= {right:.6g}"
        )
    return report


@dataclass
class HInfinityTrend:
    """Per-n Cheeger values outside G_n, with test-set upper bounds and a power-law fit.

    ``window_infimum[i]`` is the constant on (window interior) minus G_n; the window
    cuts the far tail off, so it is an estimate, not a bound. ``test_set_bound[i]`` is
    the best ratio among the components of G_{2n} minus G_n, a genuine upper bound
    for the constant outside G_n.
    """

    variant: Variant
    ns: list[int]
    window_infimum: list[float]
    test_set_bound: list[float]
    modes: list[Mode]
    envelope: Optional[list[float]] = None
    within_envelope: Optional[bool] = None
    fit_exponent: float = math.nan
    fit_prefactor: float = math.nan

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "ns": self.ns,
            "window_infimum": self.window_infimum,
            "test_set_bound": self.test_set_bound,
            "modes": self.modes,
            "envelope": self.envelope,
            "within_envelope": self.within_envelope,
            "fit_exponent": self.fit_exponent,
            "fit_prefactor": self.fit_prefactor,
        }


def power_law_fit(ns: Sequence[int], values: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit values ≈ C n^p in log-log; returns (p, C)."""
    pairs = [(n, v) for n, v in zip(ns, values) if n > 0 and v > 0]
    if len(pairs) < 2:
        return math.nan, math.nan
    slope, intercept = np.polyfit(
        np.log([n for n, _ in pairs]), np.log([v for _, v in pairs]), 1
    )
    return float(slope), float(math.exp(intercept))


def h_infinity_trend(
    graph: DirectedWeightedGraph,
    filtration: Filtration,
    ns: Sequence[int],
    variant: Variant = "h-tilde",
    envelope: Optional[Callable[[int], float]] = None,
    seed: int = 0,
) -> HInfinityTrend:
    """Cheeger constants outside G_n for each n, with test-set bounds.

    Raises:
        ValueError: If G_{2n} is beyond the filtration or reaches the window boundary
    """
    if not ns:
        raise ValueError("h_infinity_trend needs at least one level")
    interior = graph.interior()

    window_infimum: list[float] = []
    test_set_bound: list[float] = []
    modes: list[Mode] = []
    for n in ns:
        if 2 * n >= len(filtration) or filtration.level(2 * n).touches_window_boundary():
            raise ValueError(f"window too small for n={n}: G_{2 * n} must lie in the window interior")

        outside = interior.difference(filtration.level(n).vertices)
        fragment = cheeger_constant(graph, outside, variant, seed=seed)
        window_infimum.append(fragment.value)
        modes.append(fragment.mode)

        annulus = filtration.annulus(n, 2 * n)
        test_sets = _components(annulus) + [annulus]
        test_set_bound.append(min(cheeger_ratio(graph, s, variant) for s in test_sets))

    exponent, prefactor = power_law_fit(ns, test_set_bound)
    trend = HInfinityTrend(
        variant=variant,
        ns=list(ns),
        window_infimum=window_infimum,
        test_set_bound=test_set_bound,
        modes=modes,
        fit_exponent=exponent,
        fit_prefactor=prefactor,
    )
    if envelope is not None:
        trend.envelope = [float(envelope(n)) for n in ns]
        trend.within_envelope = all(
            bound <= limit + INEQUALITY_TOLERANCE
            for bound, limit in zip(test_set_bound, trend.envelope)
        )
    logger.info(f"{variant} at infinity: test-set bounds {test_set_bound}, exponent {exponent:.3g}")
    return trend


@dataclass
class AbsCell:
    """One (n, k) cell of the (Abs) table on G_k minus G_n."""

    n: int
    k: int
    h: float
    M: float
    ratio: float
    lambda1: float
    mode: Mode
    cross_check: Optional[bool]


@dataclass
class AbsConditionReport:
    """c_n = min_k h²/(8 M) over the scheduled annuli, with a growth verdict."""

    cells: list[AbsCell]
    c_sequence: dict[int, float]
    verdict: str
    cross_check_holds: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "cells": [vars(cell) for cell in self.cells],
            "c_sequence": {str(n): v for n, v in sorted(self.c_sequence.items())},
            "verdict": self.verdict,
            "cross_check_holds": self.cross_check_holds,
            "notes": self.notes,
        }


def _abs_cell(graph: DirectedWeightedGraph, filtration: Filtration, n: int, k: int, seed: int) -> AbsCell:
    annulus = filtration.annulus(n, k)
    fragment = cheeger_constant(graph, annulus, "h", seed=seed)
    bound = M_sup(graph, annulus)
    ratio = fragment.value**2 / (8 * bound)
    lam = lambda1_symmetric(assemble(graph, annulus, which="S"))
    cross_check = lam >= ratio - INEQUALITY_TOLERANCE if fragment.mode == "exact" else None
    return AbsCell(
        n=n, k=k, h=fragment.value, M=bound, ratio=ratio, lambda1=lam, mode=fragment.mode,
        cross_check=cross_check,
    )


def abs_verdict(c_sequence: Mapping[int, float]) -> str:
    """Classify the tail of c_n.

    "satisfied" when the last three values strictly increase, "not satisfied" when
    they do not increase at all, "inconclusive" otherwise.
    """
    values = [c_sequence[n] for n in sorted(c_sequence)]
    if len(values) < 3:
        return "inconclusive"
    tail = values[-3:]
    if all(b > a for a, b in zip(tail, tail[1:])):
        return "satisfied"
    if all(b <= a + 1e-12 * max(1.0, abs(a)) for a, b in zip(tail, tail[1:])):
        return "not satisfied"
    return "inconclusive"


def abs_condition(
    graph: DirectedWeightedGraph,
    filtration: Filtration,
    levels: Sequence[int],
    k_schedule: Mapping[int, Sequence[int]],
    seed: int = 0,
    threads: Optional[int] = None,
) -> AbsConditionReport:
    """Evaluate h²(G_k minus G_n) / (8 M) per cell and the sequence c_n.

    Each exact cell is cross-checked against λ₁(S^D) >= h²/(8M).

    Raises:
        ValueError: If some k <= n or G_k reaches the window boundary
    """
    cells_to_run: list[tuple[int, int]] = []
    for n in levels:
        for k in sorted(k_schedule.get(n, ())):
            if k <= n:
                raise ValueError(f"k_schedule needs k > n, got n={n}, k={k}")
            if k >= len(filtration) or filtration.level(k).touches_window_boundary():
                raise ValueError(f"window too small: G_{k} must lie in the window interior")
            cells_to_run.append((n, k))

    workers = threads if threads is not None else threads_from_env()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        cells = list(pool.map(lambda cell: _abs_cell(graph, filtration, cell[0], cell[1], seed), cells_to_run))

    c_sequence: dict[int, float] = {}
    for cell in cells:
        c_sequence[cell.n] = min(c_sequence.get(cell.n, math.inf), cell.ratio)

    notes = []
    heuristic_cells = [(c.n, c.k) for c in cells if c.mode == "heuristic"]
    if heuristic_cells:
        notes.append(f"heuristic h (upper bound) on cells {heuristic_cells}; no cross-check there")
    failures = [(c.n, c.k) for c in cells if c.cross_check is False]
    if failures:
        notes.append(f"lambda1 >= c_n fails on cells {failures}")
        logger.warning(f"(Abs) cross-check failed on {failures}")

    return AbsConditionReport(
        cells=cells,
        c_sequence=c_sequence,
        verdict=abs_verdict(c_sequence),
        cross_check_holds=not failures,
        notes=notes,
    )
