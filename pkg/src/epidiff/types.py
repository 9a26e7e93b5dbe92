from enum import Enum

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]


class RunMode(str, Enum):
    """What a CLI invocation produces."""

    SIMULATE = "simulate"
    STEADY = "steady"
    VERIFY = "verify"
    SWEEP = "sweep"


class LinearSolverKind(str, Enum):
    """Backend for the implicit diffusion and steady-state solves."""

    AUTO = "auto"
    CG = "cg"
    DIRECT = "direct"


class ReduceKind(str, Enum):
    L1 = "l1"
    L2SQ = "l2sq"
    MIN = "min"
    MAX = "max"


class EnergyVariant(str, Enum):
    """Which of the two energy functionals to evaluate.

    STATEMENT integrates all four squared species; PROOF is half the integral
    of the three host species only.
    """

    STATEMENT = "statement"
    PROOF = "proof"


class GrowthForm(str, Enum):
    """Bacterial growth law used in the fourth reaction term."""

    LOGISTIC = "logistic"
    SATURATING = "saturating"


class CoefficientKind(str, Enum):
    CONSTANT = "constant"
    SPACE_VARYING = "space-varying"
    SPACE_TIME_VARYING = "space-time-varying"


class Species(str, Enum):
    S = "S"
    I = "I"  # noqa: E741
    R = "R"
    B = "B"
