"""Reading and writing the line-oriented graph file format.

Format (UTF-8 text)::

    graph v2
    v <id> <m>            vertex with measure m
    e <src> <dst> <b>     directed edge with weight b
    w <id>                vertex whose neighbourhood is cut off by a window

Ids are signed integers or double-quoted strings; numbers are decimal or
rational ``p/q`` literals. Blank lines and lines starting with ``#`` are ignored.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from dirlap.core.models import DirectedWeightedGraph
from dirlap.core.number_utils import (
    Vertex,
    format_number,
    format_vertex_id,
    parse_number,
    parse_vertex_id,
    tokenize,
)

logger = logging.getLogger(__name__)

HEADER = "graph v2"


class GraphParseError(ValueError):
    """A graph file violates the format or the graph invariants."""

    def __init__(self, line_number: int, reason: str, detail: str = "") -> None:
        self.line_number = line_number
        self.reason = reason
        self.detail = detail
        message = f"line {line_number}: {reason}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


@dataclass
class _PendingEdge:
    line_number: int
    source: Vertex
    target: Vertex
    weight: Fraction


def _parse_id(token: tuple[str, bool], line_number: int) -> Vertex:
    try:
        return parse_vertex_id(*token)
    except ValueError as e:
        raise GraphParseError(line_number, "malformed line", str(e)) from e


def _parse_value(token: tuple[str, bool], line_number: int) -> Fraction:
    text, quoted = token
    if quoted:
        raise GraphParseError(line_number, "malformed number", text)
    try:
        return parse_number(text)
    except ValueError as e:
        raise GraphParseError(line_number, "malformed number", text) from e


def parse_graph(text: str) -> DirectedWeightedGraph:
    """Parse graph-file text.

    Args:
        text: Full file contents

    Returns:
        DirectedWeightedGraph with exactly the listed vertices and edges

    Raises:
        GraphParseError: On the first violation, with its line number and reason
    """
    measure: dict[Vertex, Fraction] = {}
    measure_lines: dict[Vertex, int] = {}
    edges: list[_PendingEdge] = []
    seen_edges: set[tuple[Vertex, Vertex]] = set()
    boundary: list[tuple[int, Vertex]] = []
    header_seen = False

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue

        if not header_seen:
            if line != HEADER:
                raise GraphParseError(line_number, "bad header", f"expected {HEADER!r}")
            header_seen = True
            continue

        tokens = tokenize(line)
        directive = tokens[0][0] if not tokens[0][1] else ""

        if directive == "v":
            if len(tokens) != 3:
                raise GraphParseError(line_number, "malformed line", "expected 'v <id> <m>'")
            vertex = _parse_id(tokens[1], line_number)
            mass = _parse_value(tokens[2], line_number)
            if vertex in measure:
                raise GraphParseError(line_number, "duplicate vertex", repr(vertex))
            if mass <= 0:
                raise GraphParseError(line_number, "nonpositive measure", repr(vertex))
            measure[vertex] = mass
            measure_lines[vertex] = line_number

        elif directive == "e":
            if len(tokens) != 4:
                raise GraphParseError(line_number, "malformed line", "expected 'e <src> <dst> <b>'")
            source = _parse_id(tokens[1], line_number)
            target = _parse_id(tokens[2], line_number)
            weight = _parse_value(tokens[3], line_number)
            if source == target:
                raise GraphParseError(line_number, "self-loop", repr(source))
            if weight <= 0:
                raise GraphParseError(line_number, "nonpositive weight", f"{source!r} -> {target!r}")
            if (source, target) in seen_edges:
                raise GraphParseError(line_number, "duplicate edge", f"{source!r} -> {target!r}")
            seen_edges.add((source, target))
            edges.append(_PendingEdge(line_number, source, target, weight))

        elif directive == "w":
            if len(tokens) != 2:
                raise GraphParseError(line_number, "malformed line", "expected 'w <id>'")
            boundary.append((line_number, _parse_id(tokens[1], line_number)))

        else:
            raise GraphParseError(line_number, "unknown directive", tokens[0][0])

    if not header_seen:
        raise GraphParseError(1, "bad header", "empty file")

    # Edges may precede their vertex lines, so endpoints are checked at the end
    for edge in edges:
        for endpoint in (edge.source, edge.target):
            if endpoint not in measure:
                raise GraphParseError(edge.line_number, "missing measure", repr(endpoint))
    for line_number, vertex in boundary:
        if vertex not in measure:
            raise GraphParseError(line_number, "unknown vertex", repr(vertex))

    graph = DirectedWeightedGraph.from_edges(
        measure=measure,
        weights={(e.source, e.target): e.weight for e in edges},
        window_boundary=[v for _, v in boundary],
    )
    logger.debug(f"Parsed graph with {len(graph)} vertices and {graph.edge_count} edges")
    return graph


def load_graph(path: Union[str, Path]) -> DirectedWeightedGraph:
    """Load a graph file.

    Raises:
        FileNotFoundError: If the file does not exist
        GraphParseError: If the contents do not parse
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Graph file not found: {path}")
    return parse_graph(path.read_text(encoding="utf-8"))


def format_graph(graph: DirectedWeightedGraph) -> str:
    """Serialize a graph deterministically (vertices, then edges, then window boundary)."""
    lines = [HEADER]
    for vertex in graph.vertices:
        lines.append(f"v {format_vertex_id(vertex)} {format_number(graph.measure[vertex])}")
    for x, y, weight in graph.edges():
        lines.append(f"e {format_vertex_id(x)} {format_vertex_id(y)} {format_number(weight)}")
    for vertex in graph.vertices:
        if vertex in graph.window_boundary:
            lines.append(f"w {format_vertex_id(vertex)}")
    return "\n".join(lines) + "\n"


def write_graph(graph: DirectedWeightedGraph, path: Union[str, Path]) -> Path:
    """Write a graph file, creating parent directories as needed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_graph(graph), encoding="utf-8")
    return path
