"""Pointwise reaction kernels of the SIRS-B system.

Every function accepts scalars or numpy arrays of matching shape and is free
of side effects, so it can be called from any worker.
"""

from typing import NamedTuple, Protocol

import numpy as np
import numpy.typing as npt

from epidiff.errors import DomainError
from epidiff.model.parameters import Parameters
from epidiff.types import GrowthForm

ArrayOrFloat = npt.NDArray[np.float64] | float


class Incidence(Protocol):
    """Force of infection from the environmental reservoir.

    Implementations must satisfy h(0) = 0 and 0 <= h(B) <= 1.
    """

    def __call__(self, B: ArrayOrFloat, K: float) -> ArrayOrFloat: ...


class ReactionVector(NamedTuple):
    f1: ArrayOrFloat
    f2: ArrayOrFloat
    f3: ArrayOrFloat
    f4: ArrayOrFloat


class ProductionDestruction(NamedTuple):
    """Reaction terms written as ``production - destruction * u``.

    Both members hold one entry per species and are nonnegative whenever the
    state is nonnegative.
    """

    production: tuple[ArrayOrFloat, ArrayOrFloat, ArrayOrFloat, ArrayOrFloat]
    destruction: tuple[ArrayOrFloat, ArrayOrFloat, ArrayOrFloat, ArrayOrFloat]


class AttractorCondition(NamedTuple):
    holds: bool
    margin: float


def _require_nonnegative(name: str, value: ArrayOrFloat) -> None:
    if np.any(np.asarray(value) < 0):
        msg = f"{name} must be nonnegative"
        raise DomainError(msg)


def incidence(B: ArrayOrFloat, K: float) -> ArrayOrFloat:
    """Saturating incidence h(B) = B / (B + K).

    Args:
        B: bacteria concentration, nonnegative
        K: half-saturation concentration, positive

    Returns:
        Values in [0, 1), monotone nondecreasing in B.

    Raises:
        DomainError: If B is negative or K is not positive.
    """
    _require_nonnegative("B", B)
    if K <= 0:
        msg = f"K must be positive, got {K}"
        raise DomainError(msg)
    return B / (B + K)


def _growth(B: ArrayOrFloat, p: Parameters) -> ArrayOrFloat:
    if p.growth is GrowthForm.SATURATING:
        return p.g * B * (1.0 - B / (B + p.K))
    return p.g * B * (1.0 - B / p.K)


def reaction(
    S: ArrayOrFloat,
    I: ArrayOrFloat,  # noqa: E741
    R: ArrayOrFloat,
    B: ArrayOrFloat,
    b_influx: ArrayOrFloat,
    p: Parameters,
    h: Incidence = incidence,
) -> ReactionVector:
    """Evaluate the four reaction right-hand sides.

    Convection of the bacteria is not part of the pointwise kernel; the
    discretization adds it.

    Raises:
        DomainError: If any state component or the influx is negative.
    """
    for name, value in (("S", S), ("I", I), ("R", R), ("B", B), ("b_influx", b_influx)):
        _require_nonnegative(name, value)

    infection = p.beta1 * S * I + p.beta2 * S * h(B, p.K)
    f1 = b_influx - infection - p.d * S + p.sigma * R
    f2 = infection - (p.d + p.gamma) * I
    f3 = p.gamma * I - (p.d + p.sigma) * R
    f4 = p.xi * I + _growth(B, p) - p.delta * B
    return ReactionVector(f1, f2, f3, f4)


def production_destruction(
    S: ArrayOrFloat,
    I: ArrayOrFloat,  # noqa: E741
    R: ArrayOrFloat,
    B: ArrayOrFloat,
    b_influx: ArrayOrFloat,
    p: Parameters,
    h: Incidence = incidence,
) -> ProductionDestruction:
    """Split each reaction term into nonnegative production and destruction rates.

    The logistic loss gB*B/K is carried as destruction rate gB/K, the
    saturating loss as gB/(B+K).
    """
    hB = h(B, p.K)
    if p.growth is GrowthForm.SATURATING:
        growth_loss = p.g * B / (B + p.K)
    else:
        growth_loss = p.g * B / p.K

    production = (
        b_influx + p.sigma * R,
        p.beta1 * S * I + p.beta2 * S * hB,
        p.gamma * I,
        p.xi * I + p.g * B,
    )
    destruction = (
        p.beta1 * I + p.beta2 * hB + p.d,
        np.full_like(np.asarray(I, dtype=float), p.d + p.gamma),
        np.full_like(np.asarray(R, dtype=float), p.d + p.sigma),
        p.delta + growth_loss,
    )
    return ProductionDestruction(production, destruction)


def infection_rate(
    S: ArrayOrFloat,
    I: ArrayOrFloat,  # noqa: E741
    B: ArrayOrFloat,
    p: Parameters,
    h: Incidence = incidence,
) -> ArrayOrFloat:
    """Local incidence beta1*S*I + beta2*S*h(B)."""
    return p.beta1 * S * I + p.beta2 * S * h(B, p.K)


def g_zero(p: Parameters) -> float:
    """Threshold rate g0 = (sigma + beta1 + beta2 + gamma) / 4."""
    return (p.sigma + p.beta1 + p.beta2 + p.gamma) / 4.0


def attractor_condition(p: Parameters) -> AttractorCondition:
    """Check the sufficient condition d - g0 > 0 and return its margin."""
    margin = p.d - g_zero(p)
    return AttractorCondition(holds=margin > 0, margin=margin)
