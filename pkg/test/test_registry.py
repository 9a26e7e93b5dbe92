"""Tests for the verification suite registry."""

from epidiff.model.result import VerdictStatus
from epidiff.registry import create_registry, list_suites, run_suites
from epidiff.verification.common import SuiteOptions


class TestRegistry:
    """Tests for create_registry and list_suites."""

    def test_suites_in_execution_order(self):
        """Test that the four suites are registered in order."""
        assert list(create_registry()) == ["nonnegativity", "mass_bound", "attractor", "convergence"]

    def test_descriptions_loaded(self):
        """Test that every suite ships a description."""
        for name, suite in create_registry().items():
            assert suite.name == name
            assert suite.description.strip()

    def test_list_suites_first_line(self):
        """Test that list_suites returns single-line summaries."""
        for summary in list_suites().values():
            assert summary
            assert "\n" not in summary


class TestRunSuites:
    """Tests for running a selection of suites."""

    def test_selected_suite_only(self, make_config):
        """Test that names restrict the run to the selected suites."""
        verdicts = run_suites(make_config(params={"d": 0.9}), SuiteOptions(), names=["attractor"])

        assert [v.suite for v in verdicts] == ["attractor"]
        assert verdicts[0].status == VerdictStatus.INAPPLICABLE

    def test_options_reach_suites(self, make_config):
        """Test that seed count and horizon are passed to the randomized suites."""
        options = SuiteOptions(seeds=2, base_seed=5, t_end=0.2)
        verdicts = run_suites(make_config(), options, names=["nonnegativity", "mass_bound"])

        assert [v.suite for v in verdicts] == ["nonnegativity", "mass_bound"]
        assert verdicts[0].metadata["seeds"] == 2
        assert verdicts[0].metadata["base_seed"] == 5
        assert verdicts[0].metadata["t_end"] == 0.2
        assert verdicts[1].metadata["runs"] == 3
