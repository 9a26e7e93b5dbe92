"""Tests for settings and run configuration."""

import math

import pytest
from pydantic import ValidationError

from epidiff.config import (
    build_config,
    dump_config,
    list_presets,
    load_preset,
    load_preset_text,
    parse_config,
    parse_document,
)
from epidiff.errors import ConfigurationError
from epidiff.settings import Settings
from epidiff.types import CoefficientKind, LinearSolverKind, RunMode


class TestSettings:
    """Tests for Settings class."""

    def test_settings_default_values(self, clean_env):
        """Test that Settings uses default values when no env vars are set."""
        settings = Settings()

        assert settings.mode == RunMode.SIMULATE
        assert settings.threads == 1
        assert settings.cadence == 10
        assert settings.linear_solver == LinearSolverKind.AUTO
        assert settings.max_halvings == 20
        assert settings.negativity_tol == 1e-12
        assert settings.nonnegativity_seeds == 20

    def test_settings_custom_env_values(self, custom_env):
        """Test that Settings reads from environment variables."""
        settings = Settings()

        assert settings.mode == RunMode.VERIFY
        assert settings.threads == 4
        assert settings.cadence == 25
        assert settings.linear_solver == LinearSolverKind.CG
        assert settings.nonnegativity_seeds == 5

    def test_settings_invalid_threads_raises_error(self, clean_env, monkeypatch):
        """Test that a thread count below one is rejected."""
        monkeypatch.setenv("EPIDIFF_THREADS", "0")

        with pytest.raises(ValueError):
            Settings()

    def test_settings_update_skips_none(self, clean_env):
        """Test that update ignores None and unknown keys."""
        settings = Settings()
        settings.update(threads=3, cadence=None, unknown="x")

        assert settings.threads == 3
        assert settings.cadence == 10

    def test_settings_update_validates(self, clean_env):
        """Test that assignments are validated."""
        settings = Settings()

        with pytest.raises(ValidationError):
            settings.update(cadence=0)


class TestParseConfig:
    """Tests for parsing and validating TOML configurations."""

    def test_parse_valid_config(self, config_text):
        """Test that a valid document is sampled onto its grid."""
        cfg = parse_config(config_text())

        assert cfg.grid.cells == (8,)
        assert cfg.params.d == 1.5
        assert cfg.influx.bound == 1.0
        assert cfg.initial.S.values.tolist() == [0.5] * 8
        assert cfg.positivity_limiter is True

    def test_negative_rate_names_key(self, config_text):
        """Test that the error message names the offending key path."""
        with pytest.raises(ConfigurationError, match=r"params\.d"):
            parse_config(config_text(params={"d": -1.0}))

    def test_unknown_key_rejected(self, config_text):
        """Test that unknown keys are errors, not silently ignored."""
        with pytest.raises(ConfigurationError, match=r"run\.dt_min"):
            parse_config(config_text(run={"t_end": 1.0, "dt_min": 0.1}))

    def test_malformed_toml(self):
        """Test that TOML syntax errors become configuration errors."""
        with pytest.raises(ConfigurationError, match="malformed"):
            parse_config("[grid\nextents = [1.0]")

    def test_zero_growth_allowed(self, config_text):
        """Test that g = 0 is a valid growth rate."""
        cfg = parse_config(config_text(params={"g": 0.0}))

        assert cfg.params.g == 0.0

    def test_negative_initial_data(self, config_text):
        """Test that negative initial data are rejected with the species named."""
        with pytest.raises(ConfigurationError, match=r"initial\.I"):
            parse_config(config_text(initial={"I": "cos(pi * x)"}))

    def test_velocity_dimension_mismatch(self, config_text):
        """Test that a velocity needs one component per axis."""
        with pytest.raises(ConfigurationError, match=r"params\.velocity"):
            parse_config(config_text(params={"velocity": [1.0, 0.0]}))

    def test_expression_within_declared_bounds(self, config_text):
        """Test a time-periodic coefficient inside its declared bounds."""
        cfg = parse_config(
            config_text(
                coefficients={"d2": {"type": "expression", "expression": "2 + sin(t)", "lower": 1.0, "upper": 3.0}},
                run={"t_end": 2.0},
            ),
        )

        assert cfg.diffusion[1].kind == CoefficientKind.SPACE_TIME_VARYING
        assert cfg.diffusion[1].lower == 1.0
        assert cfg.diffusion[1].upper == 3.0

    def test_expression_outside_declared_bounds(self, config_text):
        """Test that samples leaving the declared bounds are rejected."""
        spec = {"type": "expression", "expression": "2 + sin(t)", "lower": 2.5, "upper": 3.0}

        with pytest.raises(ConfigurationError, match=r"coefficients\.d2"):
            parse_config(config_text(coefficients={"d2": spec}))

    def test_nonpositive_diffusion_rejected(self, config_text):
        """Test that a diffusion rate needs a positive lower bound."""
        with pytest.raises(ConfigurationError, match=r"coefficients\.d3"):
            parse_config(config_text(coefficients={"d3": 0.0}))

    def test_zero_influx_allowed(self, config_text):
        """Test that the influx may vanish."""
        cfg = parse_config(config_text(coefficients={"b": 0.0}))

        assert cfg.influx.bound == 0.0

    def test_too_few_cells(self, config_text):
        """Test that grids need at least three cells per axis."""
        with pytest.raises(ConfigurationError, match="grid"):
            parse_config(config_text(cells=[2]))

    def test_unknown_sweep_axis(self, config_text):
        """Test that sweep axes must name a rate."""
        sweep = '\n[sweep]\nt_end = 1.0\n\n[[sweep.axes]]\nname = "zeta"\nmin = 1.0\nmax = 2.0\ncount = 3\n'
        text = config_text() + sweep

        with pytest.raises(ConfigurationError, match="zeta"):
            parse_document(text)

    def test_overrides_replace_fields(self, config_text):
        """Test that build_config applies keyword overrides."""
        doc = parse_document(config_text())
        cfg = build_config(doc, t_end=0.0)

        assert cfg.t_end == 0.0
        assert cfg.source == doc


class TestDumpConfig:
    """Tests for the effective configuration echo."""

    def test_dump_is_fixed_point(self, config_text):
        """Test that parse and dump reach a fixed point after one cycle."""
        dumped = dump_config(parse_document(config_text()))

        assert dump_config(parse_document(dumped)) == dumped

    def test_dump_contains_defaults(self, config_text):
        """Test that defaulted keys appear in the echo."""
        dumped = dump_config(parse_document(config_text()))

        assert "solver_tol" in dumped
        assert "positivity_safety" in dumped
        assert 'growth = "logistic"' in dumped


class TestPresets:
    """Tests for the shipped presets."""

    def test_list_presets(self):
        """Test that every shipped preset is listed with a description."""
        presets = list_presets()

        assert set(presets) == {"attractor_uniform", "seasonal", "quarantine", "threshold_sweep"}
        assert all(presets.values())

    @pytest.mark.parametrize("name", ["attractor_uniform", "seasonal", "quarantine", "threshold_sweep"])
    def test_presets_build(self, name):
        """Test that every preset validates and samples."""
        cfg = build_config(load_preset(name))

        assert cfg.t_end > 0
        assert cfg.initial.S.min() >= 0

    def test_seasonal_influx_limit(self):
        """Test that the seasonal influx converges to its declared limit."""
        cfg = build_config(load_preset("seasonal"))

        assert cfg.influx.limit_profile(cfg.grid).tolist() == [[1.0] * 32] * 32
        expected = cfg.influx.limit_defect(cfg.grid, 0.0) * math.exp(-2.0)
        assert math.isclose(cfg.influx.limit_defect(cfg.grid, 1.0), expected, rel_tol=1e-9)

    def test_threshold_sweep_section(self):
        """Test the sweep section of the threshold preset."""
        doc = load_preset("threshold_sweep")

        assert doc.sweep is not None
        assert doc.sweep.axes[0].name == "d"
        assert len(doc.sweep.axes[0].values()) == 13

    def test_unknown_preset(self):
        """Test that unknown preset names are configuration errors."""
        with pytest.raises(ConfigurationError, match="unknown preset"):
            load_preset_text("nope")
