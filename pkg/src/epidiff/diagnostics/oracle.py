"""Pointwise ODE oracle for spatially uniform runs.

With uniform initial data and a uniform influx the diffusion terms vanish and
every cell follows the same four-species ODE. The right-hand side is coded
here on its own, without the model kernels, and integrated by explicit Euler
with a fine step.
"""

import math
from typing import NamedTuple

import numpy as np

from epidiff.model.parameters import Parameters
from epidiff.model.result import DiagnosticsRecord
from epidiff.types import FloatArray, GrowthForm


class OdeSolution(NamedTuple):
    times: FloatArray
    values: FloatArray  # shape (steps + 1, 4)

    def at(self, t: float) -> FloatArray:
        """Linear interpolation of the four components at time t."""
        return np.array([np.interp(t, self.times, self.values[:, k]) for k in range(4)])


def ode_rhs(y: FloatArray, b: float, p: Parameters) -> FloatArray:
    S, I, R, B = y  # noqa: E741
    force = p.beta1 * S * I + p.beta2 * S * B / (B + p.K)
    if p.growth is GrowthForm.SATURATING:
        growth = p.g * B * p.K / (B + p.K)
    else:
        growth = p.g * B - p.g * B * B / p.K
    return np.array(
        [
            b - force - p.d * S + p.sigma * R,
            force - p.d * I - p.gamma * I,
            p.gamma * I - p.d * R - p.sigma * R,
            p.xi * I + growth - p.delta * B,
        ],
    )


def euler_oracle(
    y0: tuple[float, float, float, float],
    b: float,
    p: Parameters,
    t_end: float,
    dt: float,
) -> OdeSolution:
    """Integrate the uniform ODE from 0 to t_end with explicit Euler.

    The last step is shortened so the trajectory ends exactly at t_end.
    """
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    times = np.empty(steps + 1)
    values = np.empty((steps + 1, 4))
    times[0] = 0.0
    values[0] = y0
    y = np.array(y0, dtype=np.float64)
    t = 0.0
    for n in range(1, steps + 1):
        h = min(dt, t_end - t)
        y = y + h * ode_rhs(y, b, p)
        t = t_end if n == steps else t + h
        times[n] = t
        values[n] = y
    return OdeSolution(times, values)


def uniform_record(t: float, y: FloatArray, volume: float, s_inf: float) -> DiagnosticsRecord:
    """Diagnostics of a uniform state with value y in every cell."""
    S, I, R, B = (float(v) for v in y)  # noqa: E741
    j1 = 0.5 * volume * (S - s_inf) ** 2
    j2 = 0.5 * volume * I * I
    j3 = 0.5 * volume * R * R
    j4 = 0.5 * volume * B * B
    return DiagnosticsRecord(
        t=t,
        masses=(S * volume, I * volume, R * volume, B * volume),
        Y3=0.5 * volume * (S * S + I * I + R * R),
        Y4=volume * (S * S + I * I + R * R + B * B),
        J1=j1,
        J2=j2,
        J3=j3,
        J4=j4,
        J=j1 + j2 + j3,
        envelope=math.nan,
        min_values=(S, I, R, B),
    )
