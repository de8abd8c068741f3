"""Number and vertex-id parsing/formatting for graph files and reports.

Weights and measures are kept as exact rationals wherever the input allows it:
- decimal literals ("0.25", "1e-3") become the exact Fraction they denote
- rational literals ("3/4", "-1/4") become Fractions
- floats coming from computations are formatted with 17 significant digits

Example:
    >>> from dirlap.core.number_utils import parse_number, format_number
    >>> parse_number("3/4")
    Fraction(3, 4)
    >>> format_number(Fraction(5, 4))
    '5/4'
    >>> format_float(0.1)
    '0.10000000000000001'
"""

import math
import re
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float, int]
Vertex = Union[int, str]

FLOAT_FORMAT = ".17g"

_RATIONAL_PATTERN = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")
_DECIMAL_PATTERN = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_INTEGER_PATTERN = re.compile(r"^[+-]?\d+$")

# A token is either a double-quoted string (backslash escapes allowed) or a bare word
_TOKEN_PATTERN = re.compile(r'"((?:[^"\\]|\\.)*)"|(\S+)')


def parse_number(token: str) -> Fraction:
    """Parse a decimal or rational literal into an exact Fraction.

    Args:
        token: Literal such as "2", "0.75", "1e-3" or "3/4"

    Returns:
        Exact Fraction value

    Raises:
        ValueError: If the token is not a finite decimal or rational literal
    """
    token = token.strip()

    match = _RATIONAL_PATTERN.match(token)
    if match:
        denominator = int(match.group(2))
        if denominator == 0:
            raise ValueError(f"Zero denominator in {token!r}")
        return Fraction(int(match.group(1)), denominator)

    if _DECIMAL_PATTERN.match(token):
        return Fraction(token)

    raise ValueError(f"Not a decimal or rational number: {token!r}")


def format_number(value: Scalar) -> str:
    """Format a weight for the graph file format.

    Fractions are written as "p/q" (or "p" for integers); floats use repr so that
    reading the file back yields the identical float.
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def format_float(value: float) -> str:
    """Format a float for CSV and JSON artifacts with a fixed 17 significant digits."""
    value = float(value)
    if value == 0.0:
        # Collapse -0.0 so identical runs produce identical bytes
        return "0"
    if not math.isfinite(value):
        return str(value)
    return format(value, FLOAT_FORMAT)


def to_float(value: Scalar) -> float:
    """Convert an exact or inexact scalar to float."""
    return float(value)


def is_exact(value: Scalar) -> bool:
    """True for values that support exact arithmetic (Fraction or int)."""
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def tokenize(line: str) -> list[tuple[str, bool]]:
    """Split a graph-file line into tokens.

    Returns:
        List of (text, quoted) pairs; quoted tokens have their escapes resolved.
    """
    tokens = []
    for match in _TOKEN_PATTERN.finditer(line):
        if match.group(1) is not None:
            text = re.sub(r"\\(.)", r"\1", match.group(1))
            tokens.append((text, True))
        else:
            tokens.append((match.group(2), False))
    return tokens


def parse_vertex_id(text: str, quoted: bool) -> Vertex:
    """Interpret a token as a vertex id: quoted strings stay strings, bare words must be integers.

    Raises:
        ValueError: If a bare token is not a signed integer
    """
    if quoted:
        return text
    if not _INTEGER_PATTERN.match(text):
        raise ValueError(f"Vertex id must be a signed integer or a quoted string: {text!r}")
    return int(text)


def format_vertex_id(vertex: Vertex) -> str:
    """Format a vertex id so that parse_vertex_id reads it back unchanged."""
    if isinstance(vertex, int):
        return str(vertex)
    escaped = vertex.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def vertex_sort_key(vertex: Vertex) -> tuple[int, Union[int, str]]:
    """Total order on vertex ids: integers (numerically) before strings (lexically)."""
    if isinstance(vertex, int):
        return (0, vertex)
    return (1, vertex)
