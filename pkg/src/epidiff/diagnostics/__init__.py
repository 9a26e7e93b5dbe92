"""Functionals of the state, the pointwise ODE oracle and artifact writers."""

from epidiff.diagnostics.functionals import (
    AttractorDistance,
    RecordBuilder,
    attractor_distance,
    bacteria_mass_bound,
    cumulative_incidence_bound,
    decay_envelope,
    energy_Y,
    host_mass_bound,
    host_mass_trajectory,
    make_record,
)
from epidiff.diagnostics.oracle import OdeSolution, euler_oracle, ode_rhs, uniform_record
from epidiff.diagnostics.writers import (
    DIAGNOSTICS_COLUMNS,
    format_verdicts,
    write_diagnostics,
    write_report,
    write_sweep,
    write_verdicts,
)

__all__ = [
    "DIAGNOSTICS_COLUMNS",
    "AttractorDistance",
    "OdeSolution",
    "RecordBuilder",
    "attractor_distance",
    "bacteria_mass_bound",
    "cumulative_incidence_bound",
    "decay_envelope",
    "energy_Y",
    "euler_oracle",
    "format_verdicts",
    "host_mass_bound",
    "host_mass_trajectory",
    "make_record",
    "ode_rhs",
    "uniform_record",
    "write_diagnostics",
    "write_report",
    "write_sweep",
    "write_verdicts",
]
