"""Assembly of Δ, Δ′, S and B as matrices on ℓ²(V, m).

Row x of Δ on a subset U (Dirichlet restriction, functions extended by zero):

    (Δf)(x) = β⁺(x)/m(x) f(x) - Σ_{y ∈ U} b(x,y)/m(x) f(y)

and Δ′ likewise with β⁻ and the reversed weights b(y,x). S = (Δ + Δ′)/2 and
B = Δ - Δ′. Matrices are stored in vertex coordinates; ``symmetrized()`` gives the
unitarily equivalent form Ã = D^{1/2} A D^{-1/2}, D = diag(m), on the standard
Euclidean space.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy import linalg
from scipy.sparse import linalg as spla

from dirlap.core.models import DirectedWeightedGraph, VertexSubset, ensure_subset
from dirlap.core.number_utils import Vertex, format_float, format_vertex_id

logger = logging.getLogger(__name__)

DENSE_LIMIT = 4096
GREEN_TOLERANCE = 1e-10

OperatorLabel = Literal["delta", "delta-prime", "S", "B", "custom"]
Matrix = Union[np.ndarray, sp.csr_matrix]

# (coefficient of Δ, coefficient of Δ′) for each assembled label
_COMBINATIONS: dict[str, tuple[float, float]] = {
    "delta": (1.0, 0.0),
    "delta-prime": (0.0, 1.0),
    "S": (0.5, 0.5),
    "B": (1.0, -1.0),
}


class BoundarySupportError(ValueError):
    """A subset or a function support reaches a window-boundary vertex."""


@dataclass(frozen=True)
class WeightedOperator:
    """A square matrix acting on ℓ²(U, m) for an ordered vertex list U."""

    matrix: Matrix
    measure: np.ndarray
    label: OperatorLabel
    vertices: tuple[Vertex, ...]
    domain: Optional[VertexSubset] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        rows, cols = self.matrix.shape
        if rows != cols or rows != len(self.vertices) or self.measure.shape != (rows,):
            raise ValueError(
                f"Inconsistent operator shapes: matrix {self.matrix.shape}, "
                f"measure {self.measure.shape}, {len(self.vertices)} vertices"
            )

    @property
    def dimension(self) -> int:
        return len(self.vertices)

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        if self.is_sparse:
            return self.matrix.toarray()
        return np.asarray(self.matrix)

    def symmetrized(self) -> Matrix:
        """Ã = D^{1/2} A D^{-1/2}; same spectrum, and ℓ²(m) products become Euclidean."""
        root = np.sqrt(self.measure)
        if self.is_sparse:
            return (sp.diags(root) @ self.matrix @ sp.diags(1.0 / root)).tocsr()
        return root[:, None] * np.asarray(self.matrix) / root[None, :]

    def hermitian_part(self) -> Matrix:
        """(Ã + Ã*)/2."""
        tilde = self.symmetrized()
        return (tilde + tilde.conj().T) / 2

    def skew_part(self) -> Matrix:
        """(Ã - Ã*)/2, so that Im (Af, f)_m is a Rayleigh value of -i times it."""
        tilde = self.symmetrized()
        return (tilde - tilde.conj().T) / 2


def _triplets(
    graph: DirectedWeightedGraph, order: tuple[Vertex, ...], which: str
) -> tuple[list[int], list[int], list[float]]:
    alpha, beta = _COMBINATIONS[which]
    position = {v: i for i, v in enumerate(order)}
    rows: list[int] = []
    cols: list[int] = []
    values: list[float] = []

    for i, x in enumerate(order):
        mass = float(graph.measure[x])
        diagonal = (alpha * float(graph.beta_plus(x)) + beta * float(graph.beta_minus(x))) / mass
        rows.append(i)
        cols.append(i)
        values.append(diagonal)
        for y in graph.undirected_neighbors(x):
            j = position.get(y)
            if j is None:
                continue
            entry = -(alpha * float(graph.weight(x, y)) + beta * float(graph.weight(y, x))) / mass
            if entry != 0.0:
                rows.append(i)
                cols.append(j)
                values.append(entry)
    return rows, cols, values


def assemble(
    graph: DirectedWeightedGraph,
    subset: Optional[Iterable[Vertex]] = None,
    which: OperatorLabel = "delta",
    allow_boundary: bool = False,
) -> WeightedOperator:
    """Assemble Δ, Δ′, S or B on a subset (Dirichlet restriction).

    The diagonal always carries the full β⁺(x)/m(x) (resp. β⁻), including edges
    that leave the subset. Dense storage up to DENSE_LIMIT vertices, CSR beyond.

    Args:
        graph: Graph to assemble on
        subset: Vertices U; None means the whole vertex set
        which: "delta", "delta-prime", "S" or "B"
        allow_boundary: Accept window-boundary vertices in U (their rows are truncated)

    Returns:
        WeightedOperator indexed by U in the graph's vertex order

    Raises:
        ValueError: If U is empty or ``which`` is unknown
        BoundarySupportError: If U touches the window boundary and allow_boundary is False
    """
    if which not in _COMBINATIONS:
        raise ValueError(f"Unknown operator {which!r}; expected one of {sorted(_COMBINATIONS)}")
    domain = ensure_subset(graph, subset)
    if len(domain) == 0:
        raise ValueError("Cannot assemble an operator on an empty subset")
    if not allow_boundary and domain.touches_window_boundary():
        raise BoundarySupportError(
            "subset touches the window boundary; pass allow_boundary=True to keep truncated rows"
        )

    order = domain.ordered()
    size = len(order)
    rows, cols, values = _triplets(graph, order, which)
    measure = np.array([float(graph.measure[x]) for x in order])

    matrix: Matrix
    if size <= DENSE_LIMIT:
        matrix = np.zeros((size, size))
        np.add.at(matrix, (rows, cols), values)
    else:
        matrix = sp.csr_matrix((values, (rows, cols)), shape=(size, size))

    logger.debug(
        f"Assembled {which} on {size} vertices ({'sparse' if size > DENSE_LIMIT else 'dense'})"
    )
    return WeightedOperator(matrix=matrix, measure=measure, label=which, vertices=order, domain=domain)


def _check_vector(op_or_measure: Union[WeightedOperator, np.ndarray], f: np.ndarray) -> None:
    dimension = (
        op_or_measure.dimension
        if isinstance(op_or_measure, WeightedOperator)
        else op_or_measure.shape[0]
    )
    if f.shape != (dimension,):
        raise ValueError(f"Dimension mismatch: vector of shape {f.shape}, expected ({dimension},)")


def apply(op: WeightedOperator, f: np.ndarray) -> np.ndarray:
    """Matrix-vector product A f.

    Raises:
        ValueError: On a dimension mismatch
    """
    f = np.asarray(f)
    _check_vector(op, f)
    return np.asarray(op.matrix @ f)


def inner(f: np.ndarray, g: np.ndarray, measure: np.ndarray) -> complex:
    """(f, g)_m = Σ m(x) f(x) conj(g(x))."""
    f = np.asarray(f)
    g = np.asarray(g)
    measure = np.asarray(measure, dtype=float)
    _check_vector(measure, f)
    _check_vector(measure, g)
    return complex(np.vdot(g, measure * f))


def norm_m(f: np.ndarray, measure: np.ndarray) -> float:
    """‖f‖_m = √(f, f)_m."""
    return float(np.sqrt(max(inner(f, f, measure).real, 0.0)))


def vector_on(
    graph: DirectedWeightedGraph, values: Mapping[Vertex, complex], order: Optional[tuple[Vertex, ...]] = None
) -> np.ndarray:
    """Dense complex vector over ``order`` (default: all vertices) from a sparse mapping."""
    order = graph.vertices if order is None else order
    unknown = [v for v in values if v not in graph]
    if unknown:
        raise ValueError(f"Function defined on unknown vertices: {unknown[:5]}")
    return np.array([complex(values.get(x, 0)) for x in order], dtype=complex)


def green_residual(
    graph: DirectedWeightedGraph,
    f: Mapping[Vertex, complex],
    g: Mapping[Vertex, complex],
) -> complex:
    """(Δf, g)_m + (Δ′f, g)_m minus Σ_{(x,y)} b(x,y)(f(x) - f(y)) conj(g(x) - g(y)).

    Both functions are extended by zero; with interior supports every row involved
    is complete, so the residual is zero up to rounding.

    Raises:
        BoundarySupportError: If f or g is nonzero on a window-boundary vertex
    """
    for name, function in (("f", f), ("g", g)):
        touching = [x for x, value in function.items() if value != 0 and x in graph.window_boundary]
        if touching:
            raise BoundarySupportError(f"support must be interior ({name} is nonzero at {touching[:5]})")

    delta = assemble(graph, which="delta", allow_boundary=True)
    delta_prime = assemble(graph, which="delta-prime", allow_boundary=True)
    f_vec = vector_on(graph, f)
    g_vec = vector_on(graph, g)

    left = inner(apply(delta, f_vec), g_vec, delta.measure) + inner(
        apply(delta_prime, f_vec), g_vec, delta.measure
    )

    index = graph.index
    right = 0j
    for x, y, weight in graph.edges():
        df = f_vec[index[x]] - f_vec[index[y]]
        dg = g_vec[index[x]] - g_vec[index[y]]
        right += float(weight) * df * np.conj(dg)

    residual = complex(left - right)
    logger.debug(f"Green residual {abs(residual):.3e}")
    return residual


def green_tolerance(graph: DirectedWeightedGraph, f: Mapping[Vertex, complex], g: Mapping[Vertex, complex]) -> float:
    """Residual bound GREEN_TOLERANCE · ‖f‖·‖g‖·(total weight scale)."""
    scale = sum(float(b) for b in graph.weights.values()) / max(
        min(float(m) for m in graph.measure.values()), 1e-300
    )
    f_norm = np.sqrt(sum(abs(complex(v)) ** 2 for v in f.values()))
    g_norm = np.sqrt(sum(abs(complex(v)) ** 2 for v in g.values()))
    return GREEN_TOLERANCE * max(1.0, f_norm * g_norm * max(scale, 1.0))


def largest_singular_value(matrix: Matrix) -> float:
    if sp.issparse(matrix):
        if min(matrix.shape) <= 2:
            return float(linalg.svdvals(matrix.toarray())[0])
        return float(spla.svds(matrix, k=1, return_singular_vectors=False)[0])
    return float(linalg.svdvals(np.asarray(matrix))[0])


def operator_norm_B(graph: DirectedWeightedGraph) -> float:
    """ℓ²(V, m) norm of B = Δ - Δ′ restricted to the interior.

    Returns 0.0 when the interior is empty.
    """
    interior = graph.interior()
    if len(interior) == 0:
        return 0.0
    op = assemble(graph, interior, which="B")
    value = largest_singular_value(op.symmetrized())
    logger.info(f"||B|| = {value:.6g} on {op.dimension} interior vertices")
    return value


def export_operator(op: WeightedOperator, prefix: Union[str, Path]) -> tuple[Path, Path]:
    """Write ``<prefix>.triplets`` (``i j value`` per nonzero) and ``<prefix>.measure``.

    Indices are 0-based positions in ``op.vertices``; the measure file lists
    ``i <vertex id> m`` so the ordering can be recovered.

    Returns:
        (triplet path, measure path)
    """
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    coo = sp.coo_matrix(op.matrix)
    entries = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))

    triplet_path = prefix.with_name(prefix.name + ".triplets")
    measure_path = prefix.with_name(prefix.name + ".measure")

    lines = []
    for i, j, value in entries:
        if value == 0:
            continue
        if isinstance(value, complex):
            text = f"{format_float(value.real)} {format_float(value.imag)}"
        else:
            text = format_float(value)
        lines.append(f"{i} {j} {text}")
    triplet_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    measure_lines = [
        f"{i} {format_vertex_id(v)} {format_float(m)}"
        for i, (v, m) in enumerate(zip(op.vertices, op.measure))
    ]
    measure_path.write_text("\n".join(measure_lines) + "\n", encoding="utf-8")
    logger.info(f"Exported {op.label} operator ({len(lines)} nonzeros) to {triplet_path}")
    return triplet_path, measure_path
