"""Data models for directed weighted graphs, vertex subsets and filtrations."""

from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from dirlap.core.number_utils import Scalar, Vertex, vertex_sort_key

CONNECTIVITY_CLASSES = ("disconnected", "weakly-connected", "connected", "strongly-connected")


@dataclass(frozen=True)
class DirectedWeightedGraph:
    """A finite directed graph with vertex measure m and directed edge weights b.

    Weights are sparse: a pair absent from ``weights`` has b = 0. Graphs are immutable
    after construction; use ``from_edges`` to build one from unordered input.

    ``window_boundary`` lists vertices whose neighbourhood was cut off by a generator
    window (for the integer line of radius r these are -r and r). Their rows do not
    describe the infinite graph and are excluded from checks and spectral work unless
    a caller opts in.
    """

    vertices: tuple[Vertex, ...]
    measure: Mapping[Vertex, Scalar]
    weights: Mapping[tuple[Vertex, Vertex], Scalar]
    window_boundary: frozenset[Vertex] = frozenset()
    out_neighbors: Mapping[Vertex, tuple[Vertex, ...]] = field(
        init=False, repr=False, compare=False
    )
    in_neighbors: Mapping[Vertex, tuple[Vertex, ...]] = field(
        init=False, repr=False, compare=False
    )
    index: Mapping[Vertex, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Check the storage invariants and build adjacency indexes."""
        vertex_set = set(self.vertices)
        if len(vertex_set) != len(self.vertices):
            raise ValueError("Duplicate vertex ids")
        if set(self.measure) != vertex_set:
            missing = vertex_set.symmetric_difference(self.measure)
            raise ValueError(f"Measure must be defined exactly on the vertex set: {sorted(missing, key=vertex_sort_key)}")

        for vertex, mass in self.measure.items():
            if not mass > 0:
                raise ValueError(f"Measure must be positive: m({vertex!r}) = {mass}")

        outgoing: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        incoming: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for (x, y), weight in self.weights.items():
            if x not in vertex_set or y not in vertex_set:
                raise ValueError(f"Edge ({x!r}, {y!r}) references an unknown vertex")
            if x == y:
                raise ValueError(f"Self-loop at {x!r}")
            if not weight > 0:
                raise ValueError(f"Edge weights must be positive: b({x!r}, {y!r}) = {weight}")
            outgoing[x].append(y)
            incoming[y].append(x)

        if not self.window_boundary <= vertex_set:
            raise ValueError("Window boundary must be a subset of the vertices")

        object.__setattr__(
            self,
            "out_neighbors",
            {v: tuple(sorted(ns, key=vertex_sort_key)) for v, ns in outgoing.items()},
        )
        object.__setattr__(
            self,
            "in_neighbors",
            {v: tuple(sorted(ns, key=vertex_sort_key)) for v, ns in incoming.items()},
        )
        object.__setattr__(self, "index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def from_edges(
        cls,
        measure: Mapping[Vertex, Scalar],
        weights: Mapping[tuple[Vertex, Vertex], Scalar],
        window_boundary: Iterable[Vertex] = (),
    ) -> "DirectedWeightedGraph":
        """Build a graph, ordering vertices canonically (integers first, then strings).

        Args:
            measure: Positive vertex measure m; its keys define the vertex set
            weights: Positive directed edge weights b; absent pairs have weight 0
            window_boundary: Vertices whose neighbourhood is truncated by a window

        Raises:
            ValueError: If any storage invariant is violated
        """
        vertices = tuple(sorted(measure, key=vertex_sort_key))
        return cls(
            vertices=vertices,
            measure=dict(measure),
            weights=dict(weights),
            window_boundary=frozenset(window_boundary),
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.index

    def weight(self, x: Vertex, y: Vertex) -> Scalar:
        """b(x, y), zero when (x, y) is not an edge."""
        return self.weights.get((x, y), 0)

    def beta_plus(self, x: Vertex) -> Scalar:
        """Total outgoing weight of x."""
        return sum((self.weights[(x, y)] for y in self.out_neighbors[x]), 0)

    def beta_minus(self, x: Vertex) -> Scalar:
        """Total incoming weight of x."""
        return sum((self.weights[(y, x)] for y in self.in_neighbors[x]), 0)

    def undirected_neighbors(self, x: Vertex) -> tuple[Vertex, ...]:
        """Vertices joined to x by an edge in either direction."""
        merged = set(self.out_neighbors[x]) | set(self.in_neighbors[x])
        return tuple(sorted(merged, key=vertex_sort_key))

    def edges(self) -> Iterator[tuple[Vertex, Vertex, Scalar]]:
        """Directed edges (x, y, b(x, y)) in canonical order."""
        for x in self.vertices:
            for y in self.out_neighbors[x]:
                yield x, y, self.weights[(x, y)]

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    def interior(self) -> "VertexSubset":
        """Vertices whose full neighbourhood lies inside the window."""
        return VertexSubset.of(self, set(self.vertices) - self.window_boundary)

    def subset(self, vertices: Iterable[Vertex]) -> "VertexSubset":
        """Wrap an iterable of vertex ids as a VertexSubset of this graph."""
        return VertexSubset.of(self, vertices)

    def all_vertices(self) -> "VertexSubset":
        return VertexSubset.of(self, self.vertices)

    def induced_subgraph(self, vertices: Iterable[Vertex]) -> "DirectedWeightedGraph":
        """Restrict to a vertex set, keeping the edges between kept vertices.

        A kept vertex that loses a neighbour becomes a window-boundary vertex.
        """
        kept = set(vertices)
        unknown = kept - set(self.vertices)
        if unknown:
            raise ValueError(f"Unknown vertices: {sorted(unknown, key=vertex_sort_key)}")

        boundary = set(self.window_boundary & kept)
        for x in kept:
            if any(y not in kept for y in self.undirected_neighbors(x)):
                boundary.add(x)

        return DirectedWeightedGraph.from_edges(
            measure={v: self.measure[v] for v in kept},
            weights={(x, y): b for (x, y), b in self.weights.items() if x in kept and y in kept},
            window_boundary=boundary,
        )


@dataclass(frozen=True)
class VertexSubset:
    """A subset of a graph's vertices (Ω, U, K, ...); the complement is taken in the parent."""

    vertices: frozenset[Vertex]
    parent: DirectedWeightedGraph = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        unknown = [v for v in self.vertices if v not in self.parent]
        if unknown:
            raise ValueError(f"Vertices not in graph: {sorted(unknown, key=vertex_sort_key)}")

    @classmethod
    def of(cls, graph: DirectedWeightedGraph, vertices: Iterable[Vertex]) -> "VertexSubset":
        if isinstance(vertices, VertexSubset):
            return cls(vertices=vertices.vertices, parent=graph)
        return cls(vertices=frozenset(vertices), parent=graph)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.ordered())

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.vertices

    def ordered(self) -> tuple[Vertex, ...]:
        """Members in the parent's vertex order."""
        return tuple(v for v in self.parent.vertices if v in self.vertices)

    def complement(self) -> "VertexSubset":
        return VertexSubset.of(self.parent, set(self.parent.vertices) - self.vertices)

    def difference(self, other: Iterable[Vertex]) -> "VertexSubset":
        return VertexSubset.of(self.parent, self.vertices - set(other))

    def touches_window_boundary(self) -> bool:
        return not self.vertices.isdisjoint(self.parent.window_boundary)

    def is_weakly_connected(self) -> bool:
        """True when the induced subgraph is chain-connected (empty sets are not)."""
        if not self.vertices:
            return False
        start = next(iter(self.ordered()))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self.parent.undirected_neighbors(x):
                if y in self.vertices and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(self.vertices)

    def sorted_ids(self) -> list[Vertex]:
        """Members as a sorted list, the form used in JSON witnesses."""
        return list(self.ordered())


@dataclass(frozen=True)
class Filtration:
    """An increasing sequence of connected vertex sets exhausting the graph (G_0 ⊂ G_1 ⊂ ...)."""

    levels: tuple[VertexSubset, ...]
    allow_repeats: bool = False

    def __post_init__(self) -> None:
        if not self.levels:
            raise ValueError("A filtration needs at least one level")

        parent = self.levels[0].parent
        for n, level in enumerate(self.levels):
            if not level.is_weakly_connected():
                raise ValueError(f"Filtration level {n} is empty or not connected")
            if n == 0:
                continue
            previous = self.levels[n - 1]
            if not previous.vertices <= level.vertices:
                raise ValueError(f"Filtration level {n - 1} is not contained in level {n}")
            if previous.vertices == level.vertices and not self.allow_repeats:
                raise ValueError(f"Filtration levels {n - 1} and {n} coincide")

        if self.levels[-1].vertices != frozenset(parent.vertices):
            raise ValueError("Filtration levels must exhaust the graph")

    @classmethod
    def hop_balls(cls, graph: DirectedWeightedGraph, root: Vertex) -> "Filtration":
        """Levels G_n = vertices within n undirected hops of root.

        On the integer line with root 0 this gives G_n = {-n, ..., n}.
        """
        if root not in graph:
            raise ValueError(f"Root {root!r} not in graph")

        distance = {root: 0}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in graph.undirected_neighbors(x):
                if y not in distance:
                    distance[y] = distance[x] + 1
                    queue.append(y)

        if len(distance) != len(graph):
            raise ValueError("Graph is not weakly connected; hop balls cannot exhaust it")

        depth = max(distance.values())
        levels = tuple(
            graph.subset(v for v, d in distance.items() if d <= n) for n in range(depth + 1)
        )
        return cls(levels=levels)

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def parent(self) -> DirectedWeightedGraph:
        return self.levels[0].parent

    def level(self, n: int) -> VertexSubset:
        if not 0 <= n < len(self.levels):
            raise ValueError(f"Filtration has no level {n} (depth {len(self.levels) - 1})")
        return self.levels[n]

    def annulus(self, n: int, k: int) -> VertexSubset:
        """G_k minus G_n, for k > n."""
        if k <= n:
            raise ValueError(f"Annulus needs k > n, got n={n}, k={k}")
        return self.level(k).difference(self.level(n).vertices)

    def complement(self, n: int) -> VertexSubset:
        """V minus G_n."""
        return self.level(n).complement()


@dataclass
class ValidationReport:
    """Standing-hypothesis checks for a graph.

    ``beta_max_deviation`` is max |β⁺(x) - β⁻(x)| over interior vertices;
    ``gamma_constant`` is the least M with Σ_y |b(x,y) - b(y,x)| <= M m(x) for all x.
    """

    beta_max_deviation: float
    gamma_constant: float
    degree_bound: int
    connectivity_class: str
    outgoing_condition: bool
    self_loop_free: bool
    beta_holds: bool
    tolerance: float
    exact_arithmetic: bool
    boundary_beta_deviation: float = 0.0
    vertex_count: int = 0
    edge_count: int = 0
    vertices_without_outgoing: list[Vertex] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        """Plain dictionary for JSON output."""
        return asdict(self)


def ensure_subset(
    graph: DirectedWeightedGraph, subset: Optional[Iterable[Vertex]]
) -> VertexSubset:
    """Normalize an optional subset argument (None means the whole vertex set)."""
    if subset is None:
        return graph.all_vertices()
    if isinstance(subset, VertexSubset):
        if subset.parent is not graph and subset.parent != graph:
            raise ValueError("Subset belongs to a different graph")
        return subset
    return graph.subset(subset)
