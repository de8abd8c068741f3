"""One function per subcommand; each writes its artifacts and returns an exit code."""

import logging
from collections.abc import Callable

from dirlap.cli.artifacts import write_csv, write_json, write_text
from dirlap.cli.config import RunConfig
from dirlap.core.generators import build_graph, build_window
from dirlap.core.graph import validate
from dirlap.core.graph_io import write_graph
from dirlap.core.reports import (
    cheeger_report,
    ess_report,
    range_report,
    reproduce_z,
    spectra_report,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2


def run_validate(config: RunConfig) -> int:
    graph = build_graph(config.generator_spec())
    report = validate(graph, config.tol_beta)
    write_json(config.out / "validation.json", report.to_dict())
    print(
        f"beta deviation {report.beta_max_deviation:g} (holds: {report.beta_holds}), "
        f"M = {report.gamma_constant:g}, {report.connectivity_class}"
    )
    return EXIT_OK


def run_spectra(config: RunConfig) -> int:
    graph = build_graph(config.generator_spec())
    values, payload = spectra_report(graph)
    write_csv(
        config.out / "eigenvalues.csv",
        ["index", "re", "im"],
        [(i, v.real, v.imag) for i, v in enumerate(values)],
    )
    write_json(config.out / "lambda1.json", payload)
    print(f"lambda1 = {payload['lambda1']:.10g}, nu = {payload['nu']:.10g}")
    return EXIT_OK


def run_range(config: RunConfig) -> int:
    graph = build_graph(config.generator_spec())
    samples, sector = range_report(graph, config.angles)
    write_csv(
        config.out / "numerical_range.csv",
        ["theta", "re", "im"],
        [(theta, z.real, z.imag) for theta, z in samples],
    )
    write_json(config.out / "sector.json", sector.to_dict())
    print(f"sectorial: {sector.sectorial}, half angle {sector.half_angle:.6g}")
    return EXIT_OK


def run_cheeger(config: RunConfig) -> int:
    graph, filtration = build_window(config.generator_spec())
    rows, condition = cheeger_report(
        graph, filtration, config.effective_n_max, config.k_schedule, config.seed, config.threads
    )
    write_csv(
        config.out / "cheeger.csv",
        ["n", "h", "h_tilde", "M", "c_n"],
        [(r["n"], r["h_value"], r["h_tilde_value"], r["M_omega"], r["c_n"]) for r in rows],
    )
    write_json(config.out / "cheeger.json", {"rows": rows, "abs_condition": condition.to_dict()})
    print(f"(Abs) condition: {condition.verdict}")
    return EXIT_OK


def run_essgap(config: RunConfig) -> int:
    graph, filtration = build_window(config.generator_spec())
    estimate = ess_report(
        graph, filtration, config.effective_n_max, config.k_schedule, config.seed, config.threads
    )
    write_csv(config.out / "ess_table.csv", ["n", "k", "lambda1"], estimate.rows())
    write_json(config.out / "ess_verdict.json", estimate.to_dict())
    print(f"verdict: {estimate.verdict}, eta_ess lower estimate {estimate.eta_ess_lower:.6g}")
    return EXIT_OK


def run_gen(config: RunConfig) -> int:
    graph = build_graph(config.generator_spec())
    path = write_graph(graph, config.out / "graph.txt")
    print(f"wrote {len(graph)} vertices, {graph.edge_count} edges to {path}")
    return EXIT_OK


def run_repro_z(config: RunConfig) -> int:
    bundle = reproduce_z(config.effective_radius, config.effective_n_max, config.threads)
    out = config.out
    write_json(out / "validation.json", bundle.validation)
    write_csv(out / "lambda1_table.csv", ["n", "lambda1", "bound"], bundle.lambda1_rows)
    write_csv(out / "ess_table.csv", ["n", "k", "lambda1"], bundle.estimate.rows())
    write_json(out / "ess_verdict.json", bundle.estimate.to_dict())
    write_json(out / "h_tilde_trend.json", bundle.trend.to_dict())
    write_json(out / "sector.json", bundle.sector.to_dict())
    write_json(out / "repro.json", bundle.to_dict())
    lines = bundle.summary_lines()
    write_text(out / "summary.txt", lines)
    print("\n".join(lines))
    return EXIT_OK if bundle.passed else EXIT_CHECK_FAILED


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "validate": run_validate,
    "spectra": run_spectra,
    "range": run_range,
    "cheeger": run_cheeger,
    "essgap": run_essgap,
    "gen": run_gen,
    "repro-z": run_repro_z,
}
