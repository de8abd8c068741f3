"""Report builders shared by the command line and the tool server.

Each builder runs one analysis on a window and returns plain data; writing files
is left to the caller.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Optional

from dirlap.core.cheeger import (
    AbsConditionReport,
    HInfinityTrend,
    abs_condition,
    h_infinity_trend,
    inequality_check,
)
from dirlap.core.generators import gen_z_line, z_line_h_tilde_envelope
from dirlap.core.graph import connectivity_class, validate
from dirlap.core.models import DirectedWeightedGraph, Filtration, VertexSubset
from dirlap.core.operators import assemble, operator_norm_B
from dirlap.core.spectra import (
    VERDICT_LEVELS,
    EssSpectrumEstimate,
    SectorReport,
    boundary_angles,
    eigenvalues,
    ess_spectrum_estimate,
    lambda1_symmetric,
    lemma_S_gap,
    nu,
    numerical_range_boundary,
    sector_fit,
)

logger = logging.getLogger(__name__)


def interior_domain(graph: DirectedWeightedGraph) -> VertexSubset:
    """The window interior; raises if nothing is left."""
    interior = graph.interior()
    if len(interior) == 0:
        raise ValueError("The graph has no interior vertices")
    return interior


def usable_level(filtration: Filtration, k: int) -> bool:
    """G_k exists and stays inside the window interior."""
    return k < len(filtration) and not filtration.level(k).touches_window_boundary()


def schedule(
    filtration: Filtration, levels: Sequence[int], multipliers: Sequence[int]
) -> dict[int, list[int]]:
    """k = multiplier·n for each n, keeping only usable levels; n without any k are dropped."""
    plan: dict[int, list[int]] = {}
    for n in levels:
        ks = sorted({m * n for m in multipliers if m * n > n and usable_level(filtration, m * n)})
        if ks:
            plan[n] = ks
        else:
            logger.warning(f"No usable k for n={n}; the window is too small")
    if not plan:
        raise ValueError("window too small: no filtration level fits the k schedule")
    return plan


def spectra_report(graph: DirectedWeightedGraph) -> tuple[list[complex], dict[str, Any]]:
    """Eigenvalues of Δ on the interior plus λ₁, ν, the S-gap and ‖B‖."""
    domain = interior_domain(graph)
    delta = assemble(graph, domain, which="delta")
    values = eigenvalues(delta)
    payload = {
        "dimension": delta.dimension,
        "lambda1": lambda1_symmetric(assemble(graph, domain, which="S")),
        "nu": nu(delta),
        "lemma_S_gap": lemma_S_gap(graph, domain),
        "operator_norm_B": operator_norm_B(graph),
        "min_real_eigenvalue": min(v.real for v in values),
    }
    return values, payload


def range_report(
    graph: DirectedWeightedGraph, angle_count: int
) -> tuple[list[tuple[float, complex]], SectorReport]:
    """Numerical-range boundary samples (θ, point) and the fitted sector."""
    delta = assemble(graph, interior_domain(graph), which="delta")
    points = numerical_range_boundary(delta, angle_count)
    sector = sector_fit(graph, delta, angle_count=angle_count)
    return list(zip(boundary_angles(angle_count).tolist(), points)), sector


def cheeger_report(
    graph: DirectedWeightedGraph,
    filtration: Filtration,
    n_max: int,
    multipliers: Sequence[int],
    seed: int = 0,
    threads: Optional[int] = None,
) -> tuple[list[dict[str, Any]], AbsConditionReport]:
    """Cheeger chain on Ω_n = interior minus G_n for n = 1..n_max, plus the (Abs) table."""
    interior = interior_domain(graph)
    rows = []
    levels = []
    for n in range(1, n_max + 1):
        if n >= len(filtration):
            break
        omega = interior.difference(filtration.level(n).vertices)
        if len(omega) == 0:
            break
        report = inequality_check(graph, omega, seed=seed)
        rows.append({"n": n, **report.to_dict()})
        levels.append(n)
    if not rows:
        raise ValueError("window too small: no level leaves interior vertices outside G_n")

    plan = schedule(filtration, levels, multipliers)
    condition = abs_condition(graph, filtration, sorted(plan), plan, seed=seed, threads=threads)
    for row in rows:
        row["c_n"] = condition.c_sequence.get(row["n"], math.nan)
    return rows, condition


def ess_report(
    graph: DirectedWeightedGraph,
    filtration: Filtration,
    n_max: int,
    multipliers: Sequence[int],
    seed: int = 0,
    threads: Optional[int] = None,
) -> EssSpectrumEstimate:
    """λ₁ table over annuli for n = 1..n_max with the matching c_n sequence."""
    plan = schedule(filtration, range(1, n_max + 1), multipliers)
    estimate = ess_spectrum_estimate(graph, filtration, sorted(plan), plan, threads=threads)
    estimate.c_sequence = abs_condition(
        graph, filtration, sorted(plan), plan, seed=seed, threads=threads
    ).c_sequence
    return estimate


@dataclass
class Check:
    """One pass/fail statement of the integer-line reproduction."""

    statement: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        text = self.statement if self.passed else f"FAILED {self.statement}"
        return f"{text}  [{self.detail}]" if self.detail else text


@dataclass
class ReproductionBundle:
    """Every artifact of the integer-line example and the checks made on it."""

    radius: int
    n_max: int
    validation: dict[str, Any]
    lambda1_rows: list[tuple[int, float, float]]
    estimate: EssSpectrumEstimate
    trend: HInfinityTrend
    sector: SectorReport
    b_norm: float
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def summary_lines(self) -> list[str]:
        head = "PASS" if self.passed else "FAIL"
        return [f"{head} z-line reproduction (radius {self.radius}, n_max {self.n_max})"] + [
            check.line() for check in self.checks
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "radius": self.radius,
            "n_max": self.n_max,
            "passed": self.passed,
            "validation": self.validation,
            "lambda1": [{"n": n, "lambda1": v, "bound": b} for n, v, b in self.lambda1_rows],
            "ess": self.estimate.to_dict(),
            "h_tilde_trend": self.trend.to_dict(),
            "sector": self.sector.to_dict(),
            "operator_norm_B": self.b_norm,
            "checks": [vars(c) for c in self.checks],
        }


def _decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def reproduce_z(radius: int = 64, n_max: int = 8, threads: Optional[int] = None) -> ReproductionBundle:
    """Run the integer-line example end to end.

    Checks (β) and M = 1, λ₁(S^D on |k| >= n) >= n/8, the divergence of the annulus
    limits, the h̃ test-set bounds under their closed-form envelope, ‖B‖ <= M and the
    sector of half-angle at most π/4.

    Raises:
        ValueError: If n_max < 3 (the divergence verdict needs three levels) or
            radius <= 4·n_max (the annuli G_{4n} must fit in the window)
    """
    if n_max < VERDICT_LEVELS:
        raise ValueError(
            f"n_max must be at least {VERDICT_LEVELS} for the divergence verdict, got {n_max}"
        )
    if radius <= 4 * n_max:
        raise ValueError(f"radius must exceed 4·n_max = {4 * n_max}, got {radius}")

    graph = gen_z_line(radius)
    filtration = Filtration.hop_balls(graph, 0)
    interior = graph.interior()
    checks: list[Check] = []

    report = validate(graph)
    checks.append(Check("beta holds on the interior", report.beta_holds, f"deviation {report.beta_max_deviation:g}"))
    checks.append(
        Check("gamma constant M = 1", abs(report.gamma_constant - 1.0) <= 1e-12, f"M = {report.gamma_constant:g}")
    )
    checks.append(
        Check("strongly connected", connectivity_class(graph) == "strongly-connected")
    )

    lambda1_rows = []
    for n in range(1, n_max + 1):
        omega = interior.difference(filtration.level(n - 1).vertices)
        value = lambda1_symmetric(assemble(graph, omega, which="S"))
        bound = n / 8
        lambda1_rows.append((n, value, bound))
        checks.append(Check(f"lambda1(n={n}) >= {bound}", value >= bound, f"{value:.6g}"))

    plan = {n: [4 * n] for n in range(1, n_max + 1)}
    estimate = ess_spectrum_estimate(graph, filtration, sorted(plan), plan, threads=threads)
    checks.append(Check("essential spectrum estimate diverges", estimate.verdict == "diverges", estimate.verdict))

    ns = [n for n in (1, 2, 4, 8, 16, 32) if n <= n_max and 2 * n < radius]
    trend = h_infinity_trend(graph, filtration, ns, "h-tilde", envelope=z_line_h_tilde_envelope)
    checks.append(Check("h_tilde test-set bounds within envelope", bool(trend.within_envelope)))
    checks.append(Check("h_tilde test-set bounds decrease", _decreasing(trend.test_set_bound)))

    b_norm = operator_norm_B(graph)
    checks.append(Check("||B|| <= M", b_norm <= report.gamma_constant + 1e-8, f"{b_norm:.6g}"))

    sector = sector_fit(graph)
    checks.append(Check("sectorial", sector.sectorial, sector.diagnostic))
    checks.append(
        Check("half angle <= pi/4", sector.half_angle <= math.pi / 4 + 1e-8, f"{sector.half_angle:.6g}")
    )

    bundle = ReproductionBundle(
        radius=radius,
        n_max=n_max,
        validation=report.to_dict(),
        lambda1_rows=lambda1_rows,
        estimate=estimate,
        trend=trend,
        sector=sector,
        b_norm=b_norm,
        checks=checks,
    )
    for check in checks:
        if not check.passed:
            logger.error(f"Check failed: {check.statement}", extra={"detail": check.detail})
    logger.info(f"z-line reproduction {'passed' if bundle.passed else 'failed'}")
    return bundle
