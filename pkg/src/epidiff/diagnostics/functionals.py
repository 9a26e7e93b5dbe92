"""Energy, attractor-distance and mass functionals of a state.

All integrals are volume-weighted sums over cell centres.
"""

import math
from typing import NamedTuple

import numpy as np

from epidiff.discretization.grid import State
from epidiff.discretization.operators import field_reduce, integrate
from epidiff.errors import DomainError
from epidiff.model.parameters import Parameters
from epidiff.model.reaction import attractor_condition
from epidiff.model.result import DiagnosticsRecord
from epidiff.types import EnergyVariant, GrowthForm, ReduceKind


class AttractorDistance(NamedTuple):
    J1: float
    J2: float
    J3: float
    J4: float
    J: float


NO_TARGET = AttractorDistance(math.nan, math.nan, math.nan, math.nan, math.nan)


def energy_Y(Z: State, variant: EnergyVariant = EnergyVariant.STATEMENT) -> float:  # noqa: N802
    """Energy functional of the state.

    STATEMENT returns the integral of S^2 + I^2 + R^2 + B^2; PROOF returns
    half the integral of S^2 + I^2 + R^2.
    """
    hosts = sum(field_reduce(f, ReduceKind.L2SQ) for f in (Z.S, Z.I, Z.R))
    if variant is EnergyVariant.PROOF:
        return 0.5 * hosts
    return hosts + field_reduce(Z.B, ReduceKind.L2SQ)


def decay_envelope(t: float, Y0: float, p: Parameters, volume: float, b0: float) -> float:
    """Grönwall envelope exp(-(d-g0) t / 2) (Y0 - 1) + 2 b0 |Omega| / (d - g0).

    Raises:
        DomainError: If the attractor margin d - g0 is not positive.
    """
    condition = attractor_condition(p)
    if not condition.holds:
        msg = f"decay envelope needs d - g0 > 0, margin is {condition.margin}"
        raise DomainError(msg)
    margin = condition.margin
    return math.exp(-margin * t / 2.0) * (Y0 - 1.0) + 2.0 * b0 * volume / margin


def attractor_distance(Z: State, target: State) -> AttractorDistance:
    """Half squared L2 distances of each species to the attractor target.

    Raises:
        ContractViolation: If the state and the target live on different grids.
    """
    for u, v in zip(Z, target, strict=True):
        u.require_same_grid(v)
    cell_volume = Z.grid.cell_volume
    j1, j2, j3, j4 = (
        0.5 * float(np.sum((u.values - v.values) ** 2)) * cell_volume for u, v in zip(Z, target, strict=True)
    )
    return AttractorDistance(j1, j2, j3, j4, j1 + j2 + j3)


def masses(Z: State) -> tuple[float, float, float, float]:
    S, I, R, B = (integrate(f) for f in Z)  # noqa: E741
    return (S, I, R, B)


def host_mass_bound(M0: float, b0: float, volume: float, d: float) -> float:
    """Uniform bound C1 = max(M0, b0 |Omega| / d) on the host mass."""
    return max(M0, b0 * volume / d)


def host_mass_trajectory(t: float, M0: float, b0: float, volume: float, d: float) -> float:
    """Closed-form host mass (M0 - b0 |Omega|/d) exp(-d t) + b0 |Omega|/d for a constant influx."""
    equilibrium = b0 * volume / d
    return (M0 - equilibrium) * math.exp(-d * t) + equilibrium


def bacteria_mass_bound(B0_mass: float, C1: float, p: Parameters, volume: float) -> float:
    """Uniform bound on the bacteria mass without convection.

    For logistic growth the mass m obeys m' <= xi C1 + (g - delta) m - g m^2 / (K |Omega|);
    the bound is the larger of m(0) and the positive root of the right-hand side.
    Saturating growth is bounded by g K per unit volume, so m' <= xi C1 + g K |Omega| - delta m.
    """
    if p.growth is GrowthForm.SATURATING:
        return max(B0_mass, (p.xi * C1 + p.g * p.K * volume) / p.delta)
    if p.g == 0:
        return max(B0_mass, p.xi * C1 / p.delta)
    a = p.g / (p.K * volume)
    slope = p.g - p.delta
    root = (slope + math.sqrt(slope * slope + 4.0 * a * p.xi * C1)) / (2.0 * a)
    return max(B0_mass, root)


def cumulative_incidence_bound(t: float, S0_mass: float, b0: float, volume: float, sigma: float, C1: float) -> float:
    """Bound on the integrated incidence up to time t, from integrating the S equation."""
    return S0_mass + t * (b0 * volume + sigma * C1)


def make_record(t: float, Z: State, target: State | None, envelope: float = math.nan) -> DiagnosticsRecord:
    distance = attractor_distance(Z, target) if target is not None else NO_TARGET
    return DiagnosticsRecord(
        t=t,
        masses=masses(Z),
        Y3=energy_Y(Z, EnergyVariant.PROOF),
        Y4=energy_Y(Z, EnergyVariant.STATEMENT),
        J1=distance.J1,
        J2=distance.J2,
        J3=distance.J3,
        J4=distance.J4,
        J=distance.J,
        envelope=envelope,
        min_values=Z.minima(),
    )


class RecordBuilder:
    """Builds diagnostics records for one run.

    The envelope is anchored at the statement-variant energy of the initial
    state and is NaN when the attractor condition fails.
    """

    def __init__(self, p: Parameters, volume: float, b0: float, initial: State, target: State | None) -> None:
        self.params = p
        self.volume = volume
        self.b0 = b0
        self.target = target
        self.Y0 = energy_Y(initial, EnergyVariant.STATEMENT)
        self.has_envelope = attractor_condition(p).holds

    def envelope(self, t: float) -> float:
        if not self.has_envelope:
            return math.nan
        return decay_envelope(t, self.Y0, self.params, self.volume, self.b0)

    def __call__(self, t: float, Z: State) -> DiagnosticsRecord:
        return make_record(t, Z, self.target, self.envelope(t))
