"""Tests for the pointwise reaction kernels and the attractor threshold."""

import numpy as np
import pytest
from pydantic import ValidationError

from epidiff.errors import DomainError
from epidiff.model.parameters import Parameters
from epidiff.model.reaction import (
    attractor_condition,
    g_zero,
    incidence,
    infection_rate,
    production_destruction,
    reaction,
)
from epidiff.types import GrowthForm


class TestParameters:
    """Tests for Parameters validation."""

    def test_rates_must_be_positive(self):
        """Test that a zero death rate is rejected."""
        with pytest.raises(ValidationError):
            Parameters(d=0.0, gamma=1.0, sigma=1.0, delta=1.0, xi=1.0, g=1.0, K=1.0, beta1=1.0, beta2=1.0)

    def test_growth_may_vanish(self, unit_params):
        """Test that g = 0 is accepted and g < 0 is not."""
        assert unit_params.model_copy(update={"g": 0.0}).g == 0.0
        with pytest.raises(ValidationError):
            Parameters.model_validate({**unit_params.model_dump(), "g": -0.1})

    def test_non_finite_rejected(self, unit_params):
        """Test that infinite rates are rejected."""
        with pytest.raises(ValidationError):
            Parameters.model_validate({**unit_params.model_dump(), "beta1": float("inf")})

    def test_convection_flag(self, unit_params):
        """Test that a zero velocity does not count as convection."""
        assert not unit_params.has_convection
        assert not unit_params.model_copy(update={"velocity": (0.0, 0.0)}).has_convection
        assert unit_params.model_copy(update={"velocity": (0.5,)}).has_convection


class TestIncidence:
    """Tests for the saturating incidence h(B) = B / (B + K)."""

    def test_incidence_vanishes_at_zero(self):
        """Test h(0) = 0."""
        assert incidence(0.0, 2.0) == 0.0

    def test_incidence_is_bounded_and_monotone(self):
        """Test 0 <= h < 1 and monotonicity on a grid of values."""
        B = np.linspace(0.0, 100.0, 201)
        h = incidence(B, 0.7)

        assert np.all(h >= 0)
        assert np.all(h < 1)
        assert np.all(np.diff(h) > 0)

    def test_incidence_rejects_negative_concentration(self):
        """Test that negative B is outside the domain."""
        with pytest.raises(DomainError):
            incidence(np.array([0.1, -1e-3]), 1.0)

    def test_incidence_rejects_nonpositive_k(self):
        """Test that K must be positive."""
        with pytest.raises(DomainError):
            incidence(1.0, 0.0)


class TestReaction:
    """Tests for the reaction right-hand sides."""

    def test_reaction_at_unit_state(self, unit_params):
        """Test the four terms at S = I = R = B = b = 1 with unit rates."""
        f = reaction(1.0, 1.0, 1.0, 1.0, 1.0, unit_params)

        assert f.f1 == pytest.approx(-0.5)
        assert f.f2 == pytest.approx(-0.5)
        assert f.f3 == pytest.approx(-1.0)
        assert f.f4 == pytest.approx(0.0)

    def test_reaction_vanishes_at_disease_free_state(self, attractor_params):
        """Test that (b/d, 0, 0, 0) is an equilibrium of the kinetics."""
        b = 0.9
        f = reaction(b / attractor_params.d, 0.0, 0.0, 0.0, b, attractor_params)

        assert list(f) == pytest.approx([0.0, 0.0, 0.0, 0.0])

    def test_host_terms_sum_to_influx_minus_death(self, attractor_params):
        """Test f1 + f2 + f3 = b - d (S + I + R)."""
        rng = np.random.default_rng(3)
        S, I, R, B, b = (rng.uniform(0, 2, 50) for _ in range(5))  # noqa: E741
        f = reaction(S, I, R, B, b, attractor_params)

        np.testing.assert_allclose(f.f1 + f.f2 + f.f3, b - attractor_params.d * (S + I + R), atol=1e-13)

    def test_reaction_rejects_negative_state(self, unit_params):
        """Test that negative components raise DomainError."""
        with pytest.raises(DomainError, match="R"):
            reaction(1.0, 1.0, -0.5, 1.0, 1.0, unit_params)

    def test_reaction_rejects_negative_influx(self, unit_params):
        """Test that a negative influx raises DomainError."""
        with pytest.raises(DomainError, match="b_influx"):
            reaction(1.0, 1.0, 1.0, 1.0, -1.0, unit_params)

    def test_saturating_growth_is_bounded(self, unit_params):
        """Test that saturating growth never exceeds g K."""
        p = unit_params.model_copy(update={"growth": GrowthForm.SATURATING, "xi": 1e-9, "delta": 1e-9})
        B = np.linspace(0.0, 1e6, 50)
        f = reaction(0.0, 0.0, 0.0, B, 0.0, p)

        assert np.all(np.asarray(f.f4) <= p.g * p.K + 1e-9)

    def test_infection_rate(self, unit_params):
        """Test beta1 S I + beta2 S h(B)."""
        assert infection_rate(2.0, 0.5, 1.0, unit_params) == pytest.approx(2.0)


class TestProductionDestruction:
    """Tests for the production-destruction split."""

    @pytest.mark.parametrize("growth", [GrowthForm.LOGISTIC, GrowthForm.SATURATING])
    def test_split_reproduces_reaction(self, attractor_params, growth):
        """Test production - destruction * u equals the reaction terms."""
        p = attractor_params.model_copy(update={"growth": growth})
        rng = np.random.default_rng(11)
        S, I, R, B, b = (rng.uniform(0, 3, 40) for _ in range(5))  # noqa: E741
        f = reaction(S, I, R, B, b, p)
        split = production_destruction(S, I, R, B, b, p)

        for fk, P, D, u in zip(f, split.production, split.destruction, (S, I, R, B), strict=True):
            np.testing.assert_allclose(P - D * u, fk, atol=1e-12)

    def test_split_is_nonnegative(self, attractor_params):
        """Test that both parts are nonnegative on nonnegative states."""
        rng = np.random.default_rng(5)
        S, I, R, B, b = (rng.uniform(0, 3, 40) for _ in range(5))  # noqa: E741
        split = production_destruction(S, I, R, B, b, attractor_params)

        for part in (*split.production, *split.destruction):
            assert np.all(np.asarray(part) >= 0)


class TestAttractorCondition:
    """Tests for g0 and the margin d - g0."""

    def test_g_zero(self, unit_params):
        """Test g0 = (sigma + beta1 + beta2 + gamma) / 4."""
        p = unit_params.model_copy(update={"sigma": 2.0, "beta1": 3.0, "beta2": 4.0, "gamma": 5.0})

        assert g_zero(p) == pytest.approx(3.5)

    def test_condition_holds(self, attractor_params):
        """Test margin 0.5 for the attractor rates."""
        condition = attractor_condition(attractor_params)

        assert condition.holds
        assert condition.margin == pytest.approx(0.5)

    def test_condition_fails_at_threshold(self, unit_params):
        """Test that d = g0 does not satisfy the strict condition."""
        condition = attractor_condition(unit_params)

        assert not condition.holds
        assert condition.margin == 0.0
