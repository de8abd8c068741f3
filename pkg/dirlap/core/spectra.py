"""Eigenvalues, numerical range, sectoriality and essential-spectrum estimates.

Everything is computed in symmetrized coordinates Ã = D^{1/2} A D^{-1/2}, where the
ℓ²(V, m) inner product becomes the Euclidean one. A window only ever yields
finite-dimensional evidence: the essential spectrum of the infinite operator is
reported as a trend with a verdict, never as a computed set.
"""

import logging
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, NamedTuple, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy import linalg
from scipy.sparse import linalg as spla
from scipy.spatial import ConvexHull, QhullError

from dirlap.core.graph import gamma_constant
from dirlap.core.models import DirectedWeightedGraph, Filtration
from dirlap.core.number_utils import Vertex
from dirlap.core.operators import (
    WeightedOperator,
    assemble,
    largest_singular_value,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12
RAYLEIGH_TOLERANCE = 1e-10
EIGEN_RESIDUAL_TOLERANCE = 1e-8
HULL_TOLERANCE = 1e-6
SECTOR_TOLERANCE = 1e-8
LEWIS_TOLERANCE = 1e-8
CONVERGENCE_TOLERANCE = 1e-3
MIN_ANGLES = 8
VERDICT_LEVELS = 3
THREADS_ENV = "DIRLAP_THREADS"


class SpectralError(RuntimeError):
    """Eigensolver failure or a violated residual contract."""


def threads_from_env() -> int:
    """Worker count from DIRLAP_THREADS, default min(8, cpu count); invalid values give 1."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return min(8, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        logger.warning(f"Ignoring invalid {THREADS_ENV}={raw!r}; using 1 thread")
        return 1
    return value


def _dense(matrix: Union[np.ndarray, sp.spmatrix]) -> np.ndarray:
    if sp.issparse(matrix):
        return matrix.toarray()
    return np.asarray(matrix)


def _sort_key(value: complex) -> tuple[float, float]:
    return (round(value.real, 10), round(value.imag, 10))


def eigenvalues(
    op: WeightedOperator, return_vectors: bool = False
) -> Union[list[complex], tuple[list[complex], np.ndarray]]:
    """All eigenvalues of Ã, sorted by real part then imaginary part.

    Args:
        op: Assembled operator
        return_vectors: Also return unit eigenvectors of Ã (columns, same order)

    Raises:
        SpectralError: If the solver fails or a returned pair misses the residual contract
    """
    tilde = _dense(op.symmetrized()).astype(complex)
    if op.is_sparse:
        logger.warning(f"Computing the full spectrum of a {op.dimension}-dimensional sparse operator densely")

    try:
        if return_vectors:
            values, vectors = linalg.eig(tilde)
        else:
            values = linalg.eigvals(tilde)
    except linalg.LinAlgError as e:
        raise SpectralError(f"Eigensolver did not converge (dimension {op.dimension}): {e}") from e

    order = sorted(range(len(values)), key=lambda i: _sort_key(complex(values[i])))
    sorted_values = [complex(values[i]) for i in order]
    if not return_vectors:
        return sorted_values

    vectors = vectors[:, order]
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    scale = max(float(np.linalg.norm(tilde, 2)), 1.0)
    residuals = np.linalg.norm(tilde @ vectors - vectors * np.array(sorted_values), axis=0)
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > EIGEN_RESIDUAL_TOLERANCE * scale:
        raise SpectralError(
            f"Eigenpair residual {worst:.3e} exceeds {EIGEN_RESIDUAL_TOLERANCE:g}·||A|| "
            f"(dimension {op.dimension})"
        )
    return sorted_values, vectors


def _smallest_symmetric(matrix: Union[np.ndarray, sp.spmatrix], dimension: int) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of a real symmetric (or Hermitian) matrix."""
    if sp.issparse(matrix) and dimension > 2:
        try:
            values, vectors = spla.eigsh(matrix, k=1, which="SA", tol=1e-12, maxiter=dimension * 200)
        except spla.ArpackNoConvergence as e:
            raise SpectralError(f"Lanczos did not converge (dimension {dimension})") from e
        return float(values[0]), vectors[:, 0]

    try:
        values, vectors = linalg.eigh(_dense(matrix), subset_by_index=[0, 0])
    except linalg.LinAlgError as e:
        raise SpectralError(f"Symmetric eigensolver failed (dimension {dimension}): {e}") from e
    return float(values[0]), vectors[:, 0]


def _check_rayleigh(matrix: Union[np.ndarray, sp.spmatrix], value: float, vector: np.ndarray) -> None:
    vector = vector / np.linalg.norm(vector)
    quotient = float(np.real(np.vdot(vector, matrix @ vector)))
    scale = max(abs(value), 1.0)
    if abs(quotient - value) > RAYLEIGH_TOLERANCE * scale:
        raise SpectralError(
            f"Rayleigh residual {abs(quotient - value):.3e} exceeds {RAYLEIGH_TOLERANCE:g} "
            f"(dimension {len(vector)})"
        )


def lambda1_symmetric(op: WeightedOperator) -> float:
    """λ₁ = inf (Sf, f)_m / (f, f)_m, the smallest eigenvalue of S̃.

    Raises:
        ValueError: If op is not an S assembly, or S̃ is not symmetric within 1e-12
        SpectralError: On solver failure
    """
    if op.label != "S":
        raise ValueError(f"lambda1_symmetric needs an S assembly, got {op.label!r}")
    tilde = op.symmetrized()
    asymmetry = abs(tilde - tilde.T)
    worst = float(asymmetry.max()) if asymmetry.shape[0] else 0.0
    if worst > SYMMETRY_TOLERANCE * max(1.0, float(abs(tilde).max())):
        raise ValueError(f"beta violated on subset closure (asymmetry {worst:.3e})")

    value, vector = _smallest_symmetric(tilde, op.dimension)
    _check_rayleigh(tilde, value, vector)
    return value


def nu(op: WeightedOperator) -> float:
    """ν(A) = inf Re W(A), the smallest eigenvalue of the Hermitian part of Ã."""
    value, _ = _smallest_symmetric(op.hermitian_part(), op.dimension)
    return value


def lemma_S_gap(graph: DirectedWeightedGraph, subset: Iterable[Vertex]) -> float:
    """|λ₁(S^D_Ω) - ν(Δ^D_Ω)|; zero up to rounding when (β) holds on the closure of Ω."""
    subset = list(subset)
    symmetric = assemble(graph, subset, which="S")
    delta = assemble(graph, subset, which="delta")
    return abs(lambda1_symmetric(symmetric) - nu(delta))


def boundary_angles(count: int) -> np.ndarray:
    """θ_j = 2πj / count for j = 0..count-1."""
    return 2 * np.pi * np.arange(count) / count


def numerical_range_boundary(op: WeightedOperator, angle_count: int = 360) -> list[complex]:
    """Boundary points of W(A) by a supporting-line sweep.

    For each θ the top eigenvector v of the Hermitian part of e^{-iθ}Ã gives the
    boundary point v*Ãv. The hull of the points is an inner approximation of W(A).

    Raises:
        ValueError: If angle_count < 8
    """
    if angle_count < MIN_ANGLES:
        raise ValueError(f"angle_count must be >= {MIN_ANGLES}, got {angle_count}")

    tilde = _dense(op.symmetrized()).astype(complex)
    dimension = tilde.shape[0]
    points = []
    for theta in boundary_angles(angle_count):
        rotated = np.exp(-1j * theta) * tilde
        hermitian = (rotated + rotated.conj().T) / 2
        _, vectors = linalg.eigh(hermitian, subset_by_index=[dimension - 1, dimension - 1])
        v = vectors[:, 0]
        points.append(complex(np.vdot(v, tilde @ v) / np.vdot(v, v)))
    return points


def _distance_to_segment(z: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    direction = b - a
    length_sq = float(direction @ direction)
    if length_sq == 0.0:
        return float(np.linalg.norm(z - a))
    t = float(np.clip((z - a) @ direction / length_sq, 0.0, 1.0))
    return float(np.linalg.norm(z - (a + t * direction)))


def distance_to_hull(points: Sequence[complex], z: complex) -> float:
    """Euclidean distance from z to the convex hull of points (0 inside).

    Degenerate hulls (a point or a segment) are handled directly.
    """
    if len(points) == 0:
        raise ValueError("distance_to_hull needs at least one point")
    cloud = np.unique(np.array([[p.real, p.imag] for p in points]), axis=0)
    target = np.array([z.real, z.imag])

    if len(cloud) == 1:
        return float(np.linalg.norm(target - cloud[0]))

    try:
        if len(cloud) < 3:
            raise QhullError("fewer than three distinct points")
        hull = ConvexHull(cloud)
    except QhullError:
        # Collinear: the hull is the segment between the extreme projections
        centered = cloud - cloud.mean(axis=0)
        _, _, vt = np.linalg.svd(centered)
        projection = centered @ vt[0]
        return _distance_to_segment(
            target, cloud[int(np.argmin(projection))], cloud[int(np.argmax(projection))]
        )

    # Facet equations: normal · x + offset <= 0 inside
    if float(np.max(hull.equations[:, :2] @ target + hull.equations[:, 2])) <= 0.0:
        return 0.0
    return min(
        _distance_to_segment(target, cloud[i], cloud[j]) for i, j in hull.simplices
    )


@dataclass
class SectorReport:
    """W(A) ⊆ S_{a,θ} = {z : |arg(z - a)| ≤ θ} together with the bounds that give it."""

    nu: float
    im_bound: float
    gamma_M: float
    vertex_a: float
    half_angle: float
    sectorial: bool
    boundary_in_sector: bool = True
    diagnostic: str = ""

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def sector_fit(
    graph: DirectedWeightedGraph,
    op: Optional[WeightedOperator] = None,
    vertex_a: Optional[float] = None,
    angle_count: int = 64,
    tolerance: float = SECTOR_TOLERANCE,
) -> SectorReport:
    """Fit a sector to the numerical range of Δ.

    Args:
        graph: Graph the operator lives on; M is the (γ) constant over the rows of op
        op: Δ assembly; defaults to Δ on the interior
        vertex_a: Sector vertex a < 0; defaults to -M/2 (-1 when M = 0)
        angle_count: Boundary points sampled for the containment check
        tolerance: Slack on ν >= 0 and Im bound <= M/2

    Returns:
        SectorReport; a failed condition is reported, not raised
    """
    if op is None:
        op = assemble(graph, graph.interior(), which="delta")
    gamma_m = float(gamma_constant(graph, op.vertices))

    if vertex_a is None:
        vertex_a = -gamma_m / 2 if gamma_m > 0 else -1.0
    if vertex_a >= 0:
        raise ValueError(f"Sector vertex must be negative, got {vertex_a}")

    real_floor = nu(op)
    im_bound = largest_singular_value(op.skew_part())

    diagnostics = []
    if im_bound <= tolerance:
        half_angle = 0.0
    elif real_floor > vertex_a:
        half_angle = math.atan(im_bound / (real_floor - vertex_a))
    else:
        half_angle = math.pi / 2
        diagnostics.append("numerical range reaches left of the sector vertex")

    sectorial = real_floor >= -tolerance and im_bound <= gamma_m / 2 + tolerance
    if real_floor < -tolerance:
        diagnostics.append(f"nu = {real_floor:.6g} < 0: assumption (beta) is likely violated")
    if im_bound > gamma_m / 2 + tolerance:
        diagnostics.append(f"Im bound {im_bound:.6g} exceeds M/2 = {gamma_m / 2:.6g}")

    slope = math.tan(half_angle) if half_angle < math.pi / 2 else math.inf
    boundary_in_sector = True
    for z in numerical_range_boundary(op, max(angle_count, MIN_ANGLES)):
        reach = slope * (z.real - vertex_a) if math.isfinite(slope) else math.inf
        if abs(z.imag) > reach + HULL_TOLERANCE or z.real < vertex_a - HULL_TOLERANCE:
            boundary_in_sector = False
            break
    if not boundary_in_sector:
        diagnostics.append("sampled boundary of W(A) leaves the fitted sector")

    report = SectorReport(
        nu=real_floor,
        im_bound=im_bound,
        gamma_M=gamma_m,
        vertex_a=vertex_a,
        half_angle=half_angle,
        sectorial=sectorial,
        boundary_in_sector=boundary_in_sector,
        diagnostic="; ".join(diagnostics),
    )
    logger.info(
        f"Sector fit: nu={real_floor:.6g}, Im bound={im_bound:.6g}, "
        f"angle={half_angle:.6g}, sectorial={sectorial}"
    )
    return report


class LewisCheck(NamedTuple):
    """min Re σ(Δ^D_Ω) - λ₁(S^D_Ω), and whether it is nonnegative within 1e-8."""

    holds: bool
    margin: float


def lewis_check(graph: DirectedWeightedGraph, subset: Iterable[Vertex]) -> LewisCheck:
    """Compare the lowest real part of the Dirichlet spectrum of Δ with λ₁ of S."""
    subset = list(subset)
    spectrum = eigenvalues(assemble(graph, subset, which="delta"))
    lowest = min(value.real for value in spectrum)
    margin = lowest - lambda1_symmetric(assemble(graph, subset, which="S"))
    return LewisCheck(holds=margin >= -LEWIS_TOLERANCE, margin=margin)


@dataclass
class EssSpectrumEstimate:
    """λ₁(S^D_{G_k \\ G_n}) table with per-n limits and a divergence verdict."""

    table: dict[tuple[int, int], float]
    inner_limits: dict[int, float]
    eta_ess_lower: float
    verdict: str
    converged: dict[int, bool] = field(default_factory=dict)
    monotone_in_n: bool = True
    c_sequence: dict[int, float] = field(default_factory=dict)

    def rows(self) -> list[tuple[int, int, float]]:
        """(n, k, λ₁) rows in table order."""
        return [(n, k, value) for (n, k), value in sorted(self.table.items())]

    def to_dict(self) -> dict[str, Any]:
        return {
            "inner_limits": {str(n): v for n, v in sorted(self.inner_limits.items())},
            "converged": {str(n): v for n, v in sorted(self.converged.items())},
            "c_sequence": {str(n): v for n, v in sorted(self.c_sequence.items())},
            "eta_ess_lower": self.eta_ess_lower,
            "verdict": self.verdict,
            "monotone_in_n": self.monotone_in_n,
        }


def _strictly_increasing(values: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def _non_increasing(values: Sequence[float]) -> bool:
    return all(b <= a + 1e-12 * max(1.0, abs(a)) for a, b in zip(values, values[1:]))


def _converged(values: Sequence[float]) -> bool:
    if len(values) < 3:
        return False
    tail = values[-3:]
    return all(
        abs(b - a) <= CONVERGENCE_TOLERANCE * max(abs(a), 1e-300) for a, b in zip(tail, tail[1:])
    )


def ess_verdict(inner_limits: Mapping[int, float]) -> str:
    """Classify the tail of the inner limits.

    "diverges" when the last three are strictly increasing and the last reaches n/16;
    "bounded" when they are non-increasing; otherwise "inconclusive".
    """
    ns = sorted(inner_limits)
    if len(ns) < VERDICT_LEVELS:
        return "inconclusive"
    tail = [inner_limits[n] for n in ns[-3:]]
    if _strictly_increasing(tail) and tail[-1] >= ns[-1] / 16:
        return "diverges"
    if _non_increasing(tail):
        return "bounded"
    return "inconclusive"


def annulus_lambda1(filtration: Filtration, n: int, k: int) -> float:
    """λ₁ of the Dirichlet S on G_k \\ G_n.

    Raises:
        ValueError: If k <= n, the annulus is empty or it reaches the window boundary
    """
    annulus = filtration.annulus(n, k)
    if len(annulus) == 0:
        raise ValueError(f"Annulus G_{k} \\ G_{n} is empty")
    if annulus.touches_window_boundary():
        raise ValueError(f"window too small: G_{k} reaches the window boundary")
    return lambda1_symmetric(assemble(filtration.parent, annulus, which="S"))


def ess_spectrum_estimate(
    graph: DirectedWeightedGraph,
    filtration: Filtration,
    levels: Sequence[int],
    k_schedule: Mapping[int, Sequence[int]],
    threads: Optional[int] = None,
) -> EssSpectrumEstimate:
    """Tabulate λ₁(S^D_{G_k \\ G_n}) and read off the limits in k and the trend in n.

    Args:
        graph: Window graph
        filtration: Levels G_n over the window
        levels: The n values
        k_schedule: For each n, the increasing k values (each > n)
        threads: Worker cap; defaults to DIRLAP_THREADS

    Returns:
        EssSpectrumEstimate

    Raises:
        ValueError: If some k <= n, k is beyond the filtration, or G_k meets the window boundary
    """
    if filtration.parent != graph:
        raise ValueError("Filtration belongs to a different graph")
    if not levels:
        raise ValueError("At least one filtration level is required")

    cells: list[tuple[int, int]] = []
    for n in levels:
        ks = sorted(k_schedule.get(n, ()))
        if not ks:
            raise ValueError(f"No k values scheduled for n={n}")
        for k in ks:
            if k <= n:
                raise ValueError(f"k_schedule needs k > n, got n={n}, k={k}")
            if k >= len(filtration):
                raise ValueError(f"window too small: no filtration level {k} (depth {len(filtration) - 1})")
            if filtration.level(k).touches_window_boundary():
                raise ValueError(f"window too small: G_{k} reaches the window boundary")
            cells.append((n, k))

    workers = threads if threads is not None else threads_from_env()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        values = list(pool.map(lambda cell: annulus_lambda1(filtration, *cell), cells))
    table = dict(zip(cells, values))

    inner_limits: dict[int, float] = {}
    converged: dict[int, bool] = {}
    for n in levels:
        column = [table[(n, k)] for k in sorted(k_schedule[n])]
        if not _non_increasing(column):
            logger.warning(f"lambda1 is not nonincreasing in k at n={n}: {column}")
        inner_limits[n] = column[-1]
        converged[n] = _converged(column)

    ordered = [inner_limits[n] for n in sorted(inner_limits)]
    monotone = all(b >= a - 1e-9 * max(1.0, abs(a)) for a, b in zip(ordered, ordered[1:]))
    verdict = ess_verdict(inner_limits)

    logger.info(
        f"Essential spectrum estimate over {len(cells)} cells with {workers} workers: {verdict}",
        extra={"inner_limits": inner_limits},
    )
    return EssSpectrumEstimate(
        table=table,
        inner_limits=inner_limits,
        eta_ess_lower=ordered[-1],
        verdict=verdict,
        converged=converged,
        monotone_in_n=monotone,
    )
