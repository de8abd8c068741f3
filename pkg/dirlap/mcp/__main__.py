"""MCP server entry point for dirlap."""

import asyncio
import json
import sys
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from .tools import DirlapTools

GRAPH_KINDS = [
    "z-line",
    "symmetric-line",
    "directed-cycle",
    "symmetric-random",
    "circulation-random",
    "file",
]

_GRAPH_PROPERTIES: dict[str, Any] = {
    "kind": {
        "type": "string",
        "enum": GRAPH_KINDS,
        "description": "Graph generator, or 'file' to load a graph file",
    },
    "radius": {
        "type": "integer",
        "description": "Window radius for the line generators (default: 16)",
        "default": 16,
    },
    "size": {
        "type": "integer",
        "description": "Vertex count for cycle and random generators (default: 12)",
        "default": 12,
    },
    "seed": {"type": "integer", "description": "Random seed (default: 0)", "default": 0},
    "path": {"type": "string", "description": "Graph file path when kind is 'file'"},
}

_LEVEL_PROPERTIES: dict[str, Any] = {
    "n_max": {
        "type": "integer",
        "description": "Largest filtration level n (default: 4)",
        "default": 4,
    },
    "k_multipliers": {
        "type": "array",
        "items": {"type": "integer"},
        "description": "k = multiplier·n for each n (default: [2, 3, 4])",
    },
}


def tool_definitions() -> list[Tool]:
    """Return list of available tools."""
    return [
        Tool(
            name="validate_graph",
            description=(
                "Check the standing hypotheses on a graph: in/out weight balance (beta), "
                "the antisymmetry constant M (gamma), degree bound and connectivity."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    **_GRAPH_PROPERTIES,
                    "tolerance": {
                        "type": "number",
                        "description": "Tolerance on |beta+ - beta-| (default: 1e-12)",
                        "default": 1e-12,
                    },
                },
                "required": ["kind"],
            },
        ),
        Tool(
            name="sector_report",
            description=(
                "Fit a sector to the numerical range of the Laplacian on the window "
                "interior and return sampled boundary points."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    **_GRAPH_PROPERTIES,
                    "angles": {
                        "type": "integer",
                        "description": "Number of boundary samples, at least 8 (default: 64)",
                        "default": 64,
                    },
                },
                "required": ["kind"],
            },
        ),
        Tool(
            name="cheeger_report",
            description=(
                "Cheeger constants h and h-tilde outside each filtration level, the "
                "numerical-range Cheeger inequality and the (Abs) condition table."
            ),
            inputSchema={
                "type": "object",
                "properties": {**_GRAPH_PROPERTIES, **_LEVEL_PROPERTIES},
                "required": ["kind"],
            },
        ),
        Tool(
            name="ess_spectrum",
            description=(
                "Tabulate the lowest Dirichlet eigenvalue of the symmetric part on "
                "filtration annuli and classify the trend (diverges, bounded, inconclusive)."
            ),
            inputSchema={
                "type": "object",
                "properties": {**_GRAPH_PROPERTIES, **_LEVEL_PROPERTIES},
                "required": ["kind"],
            },
        ),
        Tool(
            name="reproduce_z_example",
            description=(
                "Run the integer-line example end to end and return every check with "
                "a pass/fail summary."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "radius": {"type": "integer", "default": 64},
                    "n_max": {"type": "integer", "default": 8},
                },
                "required": [],
            },
        ),
    ]


def dispatch(tools: DirlapTools, name: str, arguments: dict[str, Any]) -> dict[str, Any]:
    """Route a tool call; failures become an error payload."""
    handlers = {
        "validate_graph": tools.validate_graph,
        "sector_report": tools.sector_report,
        "cheeger_report": tools.cheeger_report,
        "ess_spectrum": tools.ess_spectrum,
        "reproduce_z_example": tools.reproduce_z_example,
    }
    handler = handlers.get(name)
    if handler is None:
        return {"error": f"Unknown tool: {name}"}
    try:
        return handler(**arguments)
    except Exception as e:
        return {"error": str(e), "tool": name}


async def main() -> None:
    """Run the dirlap MCP server."""
    tools = DirlapTools()
    server = Server("dirlap")

    print("dirlap MCP server initialized and ready for connections", file=sys.stderr)

    @server.list_tools()
    async def list_tools() -> list[Tool]:
        return tool_definitions()

    @server.call_tool()
    async def call_tool(name: str, arguments: dict[str, Any]) -> list[TextContent]:
        """Call a tool and return results."""
        result = dispatch(tools, name, arguments)
        return [TextContent(type="text", text=json.dumps(result, indent=2, default=str))]

    async with stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, server.create_initialization_options())


def run() -> None:
    """Synchronous entry point for MCP server."""
    asyncio.run(main())


if __name__ == "__main__":
    run()
