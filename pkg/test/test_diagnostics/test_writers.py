"""Tests for CSV and report writers."""

import math

import pytest

from epidiff.diagnostics.functionals import make_record
from epidiff.diagnostics.writers import (
    DIAGNOSTICS_COLUMNS,
    format_verdicts,
    read_diagnostics,
    sweep_frame,
    write_diagnostics,
    write_report,
    write_sweep,
)
from epidiff.discretization.grid import State
from epidiff.model.result import (
    CriterionResult,
    SweepClassification,
    SweepPointResult,
    SweepResult,
    SweepSummary,
    VerificationVerdict,
)


class TestDiagnosticsCsv:
    """Tests for diagnostics.csv."""

    def test_header_and_rows(self, tmp_path, uniform_config):
        """Test the exact header and one row per record."""
        target = uniform_config.initial
        records = [make_record(t, uniform_config.initial, target, envelope=1.0 / 3.0) for t in (0.0, 0.1, 0.2)]
        path = write_diagnostics(tmp_path / "diagnostics.csv", records)

        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(DIAGNOSTICS_COLUMNS)
        assert len(lines) == 4

    def test_full_precision_round_trip(self, tmp_path, uniform_config):
        """Test that values survive the CSV at full precision."""
        records = [make_record(0.1, uniform_config.initial, None, envelope=1.0 / 3.0)]
        frame = read_diagnostics(write_diagnostics(tmp_path / "d.csv", records))

        assert frame["envelope"][0] == 1.0 / 3.0
        assert frame["t"][0] == 0.1
        assert math.isnan(frame["J"][0])

    def test_nan_spelling(self, tmp_path, grid_1d):
        """Test that missing attractor distances are written as nan."""
        path = write_diagnostics(tmp_path / "d.csv", [make_record(0.0, State.zeros(grid_1d), None)])

        assert ",nan," in path.read_text().splitlines()[1]


class TestVerdicts:
    """Tests for the verdict report format."""

    def test_format_lines(self):
        """Test criterion lines, informational markers and the verdict line."""
        verdict = VerificationVerdict.from_criteria(
            "mass_bound",
            [
                CriterionResult.check("host_mass_sup/bound", 0.5, 1.25, passed=True),
                CriterionResult.check("closed_form", 2e-3, 1e-3, passed=False, informational=True),
            ],
        )
        lines = format_verdicts([verdict]).splitlines()

        assert lines[0] == "mass_bound | host_mass_sup/bound | measured=0.5 | threshold=1.25 | PASS"
        assert lines[1] == "mass_bound | closed_form | measured=0.002 | threshold=0.001 | FAIL (informational)"
        assert lines[2] == "mass_bound | verdict | PASS"

    def test_inapplicable_verdict(self):
        """Test that inapplicable suites carry their reason."""
        verdict = VerificationVerdict.create_inapplicable("attractor", "d - g0 = -0.1 is not positive")
        text = format_verdicts([verdict])

        assert "attractor | precondition | measured=nan | threshold=nan | INAPPLICABLE" in text
        assert "attractor | note | d - g0 = -0.1 is not positive" in text
        assert text.endswith("attractor | verdict | INAPPLICABLE\n")


class TestVerdictAggregation:
    """Tests for aggregating criteria into verdicts."""

    def test_informational_failure_does_not_gate(self):
        """Test that informational criteria never fail a suite."""
        verdict = VerificationVerdict.from_criteria(
            "s",
            [CriterionResult.check("a", 1.0, 0.0, passed=False, informational=True)],
        )

        assert verdict.passed

    def test_gating_failure(self):
        """Test that one failing gating criterion fails the suite."""
        verdict = VerificationVerdict.from_criteria(
            "s",
            [
                CriterionResult.check("a", 1.0, 2.0, passed=True),
                CriterionResult.check("b", 3.0, 2.0, passed=False),
                CriterionResult.inapplicable("c", "no target"),
            ],
        )

        assert not verdict.passed


class TestSweepCsv:
    """Tests for sweep.csv."""

    @pytest.fixture
    def sweep_result(self) -> SweepResult:
        """Two classified points and one failure on a single axis."""
        points = [
            SweepPointResult(
                index=0,
                values={"d": 0.8},
                margin=-0.2,
                ratio=0.9,
                classification=SweepClassification.PERSISTENT,
            ),
            SweepPointResult(
                index=1,
                values={"d": 1.5},
                margin=0.5,
                ratio=1e-9,
                classification=SweepClassification.ATTRACTOR,
            ),
            SweepPointResult(
                index=2,
                values={"d": 2.0},
                margin=1.0,
                ratio=math.nan,
                classification=SweepClassification.FAILED,
                message="aborted",
            ),
        ]
        summary = SweepSummary(total=3, attractor=1, persistent=1, failed=1)
        return SweepResult(axes=["d"], points=points, summary=summary)

    def test_columns(self, sweep_result):
        """Test the column order."""
        assert list(sweep_frame(sweep_result).columns) == ["index", "d", "margin", "ratio", "classification"]

    def test_rows(self, tmp_path, sweep_result):
        """Test one line per point with the classification spelled out."""
        lines = write_sweep(tmp_path / "sweep.csv", sweep_result).read_text().splitlines()

        assert lines[0] == "index,d,margin,ratio,classification"
        assert lines[2] == "1,1.5,0.5,1.0000000000000001e-09,attractor"
        assert lines[3].endswith(",nan,failed")


class TestReport:
    """Tests for key = value reports."""

    def test_report(self, tmp_path):
        """Test integer and full-precision float entries."""
        path = write_report(tmp_path / "steady_report.txt", {"iterations": 12, "relative_residual": 0.1})

        assert path.read_text() == "iterations = 12\nrelative_residual = 0.10000000000000001\n"
