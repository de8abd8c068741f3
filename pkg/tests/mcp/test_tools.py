"""Tests for MCP tool implementations.

Tests call the tools directly and through the dispatcher the server uses.
"""

import asyncio
import json

import pytest

from dirlap.mcp.__main__ import dispatch, tool_definitions
from dirlap.mcp.tools import DirlapTools


@pytest.fixture
def tools():
    """Single-threaded tools so tests stay deterministic in timing."""
    return DirlapTools(threads=1)


class TestToolDefinitions:
    """Test the advertised tool list."""

    def test_names(self):
        """Five tools are exposed."""
        names = [tool.name for tool in tool_definitions()]
        assert names == [
            "validate_graph",
            "sector_report",
            "cheeger_report",
            "ess_spectrum",
            "reproduce_z_example",
        ]

    def test_schemas_require_kind(self):
        """Every graph tool needs a generator kind."""
        for tool in tool_definitions()[:4]:
            assert tool.inputSchema["required"] == ["kind"]
            assert "file" in tool.inputSchema["properties"]["kind"]["enum"]


class TestValidateGraph:
    """Test validate_graph tool."""

    def test_z_line(self, tools):
        """Returns the validation report as a dictionary."""
        response = tools.validate_graph(kind="z-line", radius=8)
        assert isinstance(response, dict)
        assert response["beta_holds"] is True
        assert response["gamma_constant"] == 1.0

    def test_file(self, tools, graph_file):
        """Graph files are loaded by path."""
        response = tools.validate_graph(kind="file", path=str(graph_file))
        assert response["vertex_count"] == 2

    def test_result_is_json_serializable(self, tools):
        """Payloads survive the server's JSON encoding."""
        response = tools.validate_graph(kind="circulation-random", size=10, seed=3)
        assert json.loads(json.dumps(response))["beta_max_deviation"] == 0.0


class TestAnalysisTools:
    """Test sector, Cheeger and essential-spectrum tools."""

    def test_sector_report(self, tools):
        """Sector plus boundary samples as [θ, re, im] triples."""
        response = tools.sector_report(kind="directed-cycle", size=3, angles=12)
        assert response["sector"]["sectorial"] is True
        assert len(response["boundary"]) == 12
        assert all(len(point) == 3 for point in response["boundary"])

    def test_cheeger_report(self, tools):
        """Rows and the (Abs) table."""
        response = tools.cheeger_report(kind="z-line", radius=16, n_max=2, k_multipliers=[2, 3])
        assert [row["n"] for row in response["rows"]] == [1, 2]
        assert response["abs_condition"]["cross_check_holds"] is True

    def test_ess_spectrum(self, tools):
        """The estimate carries a flat table."""
        response = tools.ess_spectrum(kind="z-line", radius=32, n_max=4)
        assert response["verdict"] in ("diverges", "bounded", "inconclusive")
        assert {"n", "k", "lambda1"} <= set(response["table"][0])

    def test_reproduce_z_example(self, tools):
        """Small integer-line run with its summary lines."""
        response = tools.reproduce_z_example(radius=20, n_max=4)
        assert response["passed"] is True
        assert response["summary"][0].startswith("PASS")


class TestDispatch:
    """Test routing and error payloads."""

    def test_routes_to_tool(self, tools):
        """Known names call the matching method."""
        response = dispatch(tools, "validate_graph", {"kind": "directed-cycle", "size": 4})
        assert response["connectivity_class"] == "strongly-connected"

    def test_unknown_tool(self, tools):
        """Unknown names produce an error payload."""
        assert dispatch(tools, "nope", {}) == {"error": "Unknown tool: nope"}

    def test_failures_become_errors(self, tools):
        """Exceptions are reported with the tool name."""
        response = dispatch(tools, "validate_graph", {"kind": "file", "path": "/no/such/graph.txt"})
        assert response["tool"] == "validate_graph"
        assert "not found" in response["error"]

    def test_invalid_parameters(self, tools):
        """Generator validation errors are reported, not raised."""
        response = dispatch(tools, "sector_report", {"kind": "directed-cycle", "size": 2})
        assert "error" in response

    def test_dispatch_inside_event_loop(self, tools):
        """The synchronous dispatcher is usable from the async handler."""

        async def call():
            return dispatch(tools, "validate_graph", {"kind": "z-line", "radius": 4})

        assert asyncio.run(call())["beta_holds"] is True
