"""End-to-end acceptance runs on full-size windows.

These exercise the integer-line example at radius 64 and the unit-weight line,
through the library and through the command line.

Run with: pytest tests/integration/test_acceptance.py -v -s
"""

import csv
import json
import math

import pytest

from dirlap.cli.__main__ import main
from dirlap.core.cheeger import abs_condition
from dirlap.core.generators import z_line_h_tilde_envelope
from dirlap.core.models import Filtration
from dirlap.core.reports import reproduce_z, schedule


@pytest.mark.integration
class TestIntegerLineReproduction:
    """Full integer-line run at radius 64 up to n = 8."""

    @pytest.fixture(scope="class")
    def bundle(self):
        """Run the reproduction once for the whole class."""
        return reproduce_z(radius=64, n_max=8, threads=2)

    def test_all_checks_pass(self, bundle):
        """Every recorded check passes."""
        assert bundle.passed, "\n".join(bundle.summary_lines())

    def test_lambda1_bound_and_growth(self, bundle):
        """λ₁ >= n/8 for n = 1..8 and strictly increasing."""
        values = [value for _, value, _ in bundle.lambda1_rows]
        for n, value, bound in bundle.lambda1_rows:
            assert bound == n / 8
            assert value >= bound
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_essential_spectrum_diverges(self, bundle):
        """Inner limits at k = 4n grow past n/8."""
        assert bundle.estimate.verdict == "diverges"
        for n, limit in bundle.estimate.inner_limits.items():
            assert limit >= n / 8

    def test_h_tilde_envelope(self, bundle):
        """Test-set bounds lie under the closed-form envelope and decrease."""
        trend = bundle.trend
        assert trend.ns == [1, 2, 4, 8]
        for n, bound in zip(trend.ns, trend.test_set_bound):
            assert bound <= z_line_h_tilde_envelope(n)
        assert trend.test_set_bound == sorted(trend.test_set_bound, reverse=True)

    def test_assumptions_and_sector(self, bundle):
        """(β) exact, M = 1, Im bound <= 1/2 and half angle <= π/4."""
        assert bundle.validation["beta_max_deviation"] == 0.0
        assert bundle.validation["gamma_constant"] == 1.0
        assert bundle.sector.im_bound <= 0.5 + 1e-8
        assert bundle.sector.vertex_a == -0.5
        assert bundle.sector.half_angle <= math.pi / 4 + 1e-6
        assert bundle.b_norm <= 1.0 + 1e-8


@pytest.mark.integration
class TestAbsConditionAcceptance:
    """(Abs) cross-checks on the reference windows."""

    def test_integer_line_cross_check(self, z_window_64, z_filtration_64):
        """λ₁ >= c_n on every (n, k) cell."""
        plan = schedule(z_filtration_64, range(1, 9), [2, 3, 4])
        report = abs_condition(z_window_64, z_filtration_64, sorted(plan), plan, threads=2)
        assert report.cross_check_holds
        for cell in report.cells:
            assert cell.lambda1 >= report.c_sequence[cell.n] - 1e-8

    def test_unit_line_not_satisfied(self, symmetric_line):
        """c_n tends to zero on the unit-weight line."""
        filtration = Filtration.hop_balls(symmetric_line, 0)
        plan = schedule(filtration, [2, 4, 8], [2, 4])
        report = abs_condition(symmetric_line, filtration, sorted(plan), plan, threads=2)
        assert report.verdict == "not satisfied"
        values = [report.c_sequence[n] for n in sorted(report.c_sequence)]
        assert values[-1] < values[0] / 4


@pytest.mark.integration
class TestCommandLineReproduction:
    """The repro-z command with its defaults."""

    def test_default_run(self, tmp_path, capsys):
        """Exit code 0, PASS summary and one λ₁ row per n."""
        assert main(["repro-z", "--out", str(tmp_path), "--threads", "2"]) == 0
        assert capsys.readouterr().out.splitlines()[0].startswith("PASS z-line reproduction")

        with (tmp_path / "lambda1_table.csv").open(encoding="utf-8", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert [int(row["n"]) for row in rows] == list(range(1, 9))
        assert all(float(row["lambda1"]) >= float(row["bound"]) for row in rows)

        repro = json.loads((tmp_path / "repro.json").read_text(encoding="utf-8"))
        assert repro["passed"] is True
        assert repro["radius"] == 64
