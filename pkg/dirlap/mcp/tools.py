"""MCP tool definitions for dirlap graph analyses."""

import logging
from typing import Any, Optional

from dirlap.core.generators import GeneratorSpec, build_graph, build_window
from dirlap.core.graph import validate
from dirlap.core.reports import cheeger_report, ess_report, range_report, reproduce_z

logger = logging.getLogger(__name__)


class DirlapTools:
    """Tools for the dirlap MCP server.

    Every tool takes generator parameters (or a graph file path) and returns the
    same payload the command line writes as JSON.
    """

    def __init__(self, threads: Optional[int] = None) -> None:
        """Initialize tools.

        Args:
            threads: Worker cap for table computations (None: DIRLAP_THREADS)
        """
        self.threads = threads

    @staticmethod
    def _spec(
        kind: str,
        radius: int = 16,
        size: int = 12,
        seed: int = 0,
        path: Optional[str] = None,
        **extra: Any,
    ) -> GeneratorSpec:
        return GeneratorSpec(kind=kind, radius=radius, size=size, seed=seed, path=path, **extra)

    def validate_graph(
        self,
        kind: str,
        radius: int = 16,
        size: int = 12,
        seed: int = 0,
        path: Optional[str] = None,
        tolerance: float = 1e-12,
    ) -> dict[str, Any]:
        """Check outgoing edges, (β) and (γ) on a generated or loaded graph.

        Returns:
            ValidationReport as a dictionary
        """
        graph = build_graph(self._spec(kind, radius, size, seed, path))
        return validate(graph, tolerance).to_dict()

    def sector_report(
        self,
        kind: str,
        radius: int = 16,
        size: int = 12,
        seed: int = 0,
        path: Optional[str] = None,
        angles: int = 64,
    ) -> dict[str, Any]:
        """Sector containing the numerical range of Δ on the interior.

        Returns:
            Sector report plus the sampled boundary points
        """
        graph = build_graph(self._spec(kind, radius, size, seed, path))
        samples, sector = range_report(graph, angles)
        return {
            "sector": sector.to_dict(),
            "boundary": [[theta, z.real, z.imag] for theta, z in samples],
        }

    def cheeger_report(
        self,
        kind: str,
        radius: int = 16,
        size: int = 12,
        seed: int = 0,
        path: Optional[str] = None,
        n_max: int = 4,
        k_multipliers: Optional[list[int]] = None,
    ) -> dict[str, Any]:
        """Cheeger chain per level and the (Abs) condition table."""
        graph, filtration = build_window(self._spec(kind, radius, size, seed, path))
        rows, condition = cheeger_report(
            graph, filtration, n_max, k_multipliers or [2, 3, 4], seed=seed, threads=self.threads
        )
        return {"rows": rows, "abs_condition": condition.to_dict()}

    def ess_spectrum(
        self,
        kind: str,
        radius: int = 16,
        size: int = 12,
        seed: int = 0,
        path: Optional[str] = None,
        n_max: int = 4,
        k_multipliers: Optional[list[int]] = None,
    ) -> dict[str, Any]:
        """Annulus λ₁ table and the essential-spectrum verdict."""
        graph, filtration = build_window(self._spec(kind, radius, size, seed, path))
        estimate = ess_report(
            graph, filtration, n_max, k_multipliers or [2, 3, 4], seed=seed, threads=self.threads
        )
        return {
            **estimate.to_dict(),
            "table": [{"n": n, "k": k, "lambda1": v} for n, k, v in estimate.rows()],
        }

    def reproduce_z_example(self, radius: int = 64, n_max: int = 8) -> dict[str, Any]:
        """Full integer-line reproduction with its pass/fail checks."""
        bundle = reproduce_z(radius, n_max, threads=self.threads)
        logger.info(f"z-line reproduction via MCP: passed={bundle.passed}")
        return {**bundle.to_dict(), "summary": bundle.summary_lines()}
