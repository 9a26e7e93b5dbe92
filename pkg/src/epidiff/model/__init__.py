"""Model kernels and result models."""

from epidiff.model.parameters import Parameters
from epidiff.model.reaction import (
    AttractorCondition,
    ProductionDestruction,
    ReactionVector,
    attractor_condition,
    g_zero,
    incidence,
    infection_rate,
    production_destruction,
    reaction,
)

__all__ = [
    "AttractorCondition",
    "Parameters",
    "ProductionDestruction",
    "ReactionVector",
    "attractor_condition",
    "g_zero",
    "incidence",
    "infection_rate",
    "production_destruction",
    "reaction",
]
