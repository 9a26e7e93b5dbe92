import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, InstanceOf

from epidiff.discretization.grid import State

Quad = tuple[float, float, float, float]


class RunStatus(str, Enum):
    COMPLETED = "completed"
    ABORTED = "aborted"


class VerdictStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"


class StepReport(BaseModel):
    """Outcome of one accepted time step."""

    model_config = ConfigDict(frozen=True)

    t_new: float
    dt_used: float
    linear_iterations: tuple[int, int, int, int]
    min_values: Quad
    incidence: float = 0.0
    halvings: int = 0


class DiagnosticsRecord(BaseModel):
    """Functionals of the state at one time level.

    ``J1``..``J4`` and ``J`` are NaN when no attractor target is available;
    ``envelope`` is NaN when the attractor condition fails.
    """

    model_config = ConfigDict(frozen=True)

    t: float
    masses: Quad
    Y3: float
    Y4: float
    J1: float
    J2: float
    J3: float
    J4: float
    J: float
    envelope: float
    min_values: Quad

    def row(self) -> list[float]:
        return [
            self.t,
            *self.masses,
            self.Y3,
            self.Y4,
            self.J1,
            self.J2,
            self.J3,
            self.J4,
            self.J,
            self.envelope,
            *self.min_values,
        ]

    @property
    def has_target(self) -> bool:
        return not math.isnan(self.J)


class RunResult(BaseModel):
    """Final state and diagnostics series of a simulation.

    ``records`` and ``reports`` hold one entry per accepted step; the initial
    state and its record are kept separately.
    """

    model_config = ConfigDict(frozen=True)

    status: RunStatus
    initial: InstanceOf[State]
    final: InstanceOf[State]
    t_final: float
    initial_record: DiagnosticsRecord
    records: list[DiagnosticsRecord]
    reports: list[StepReport]
    message: str | None = None

    @classmethod
    def create_completed(cls, **kwargs: Any) -> "RunResult":
        return RunResult(status=RunStatus.COMPLETED, **kwargs)

    @classmethod
    def create_aborted(cls, message: str, **kwargs: Any) -> "RunResult":
        return RunResult(status=RunStatus.ABORTED, message=message, **kwargs)

    @property
    def completed(self) -> bool:
        return self.status is RunStatus.COMPLETED

    @property
    def series(self) -> list[DiagnosticsRecord]:
        """Initial record followed by the per-step records."""
        return [self.initial_record, *self.records]


class CriterionResult(BaseModel):
    name: str
    measured: float
    threshold: float
    status: VerdictStatus
    informational: bool = False
    message: str | None = None

    @classmethod
    def check(
        cls,
        name: str,
        measured: float,
        threshold: float,
        *,
        passed: bool,
        informational: bool = False,
        message: str | None = None,
    ) -> "CriterionResult":
        status = VerdictStatus.PASS if passed else VerdictStatus.FAIL
        return CriterionResult(
            name=name,
            measured=measured,
            threshold=threshold,
            status=status,
            informational=informational,
            message=message,
        )

    @classmethod
    def inapplicable(cls, name: str, message: str) -> "CriterionResult":
        return CriterionResult(
            name=name,
            measured=math.nan,
            threshold=math.nan,
            status=VerdictStatus.INAPPLICABLE,
            message=message,
        )


class VerificationVerdict(BaseModel):
    model_config = ConfigDict(extra="allow")

    suite: str
    status: VerdictStatus
    criteria: list[CriterionResult]
    metadata: dict[str, Any] = {}
    message: str | None = None

    @classmethod
    def from_criteria(
        cls,
        suite: str,
        criteria: list[CriterionResult],
        **kwargs: Any,
    ) -> "VerificationVerdict":
        """Pass iff every gating, applicable criterion passes."""
        gating = [c for c in criteria if not c.informational and c.status is not VerdictStatus.INAPPLICABLE]
        failed = any(c.status is VerdictStatus.FAIL for c in gating)
        status = VerdictStatus.FAIL if failed else VerdictStatus.PASS
        return VerificationVerdict(suite=suite, status=status, criteria=criteria, **kwargs)

    @classmethod
    def create_inapplicable(cls, suite: str, message: str, **kwargs: Any) -> "VerificationVerdict":
        return VerificationVerdict(
            suite=suite,
            status=VerdictStatus.INAPPLICABLE,
            criteria=[CriterionResult.inapplicable("precondition", message)],
            message=message,
            **kwargs,
        )

    @classmethod
    def create_fail(cls, suite: str, message: str, **kwargs: Any) -> "VerificationVerdict":
        return VerificationVerdict(suite=suite, status=VerdictStatus.FAIL, criteria=[], message=message, **kwargs)

    @property
    def passed(self) -> bool:
        return self.status is VerdictStatus.PASS


class VerificationSummary(BaseModel):
    total: int
    passed: int
    failed: int
    inapplicable: int

    @classmethod
    def of(cls, verdicts: list[VerificationVerdict]) -> "VerificationSummary":
        return VerificationSummary(
            total=len(verdicts),
            passed=sum(v.status is VerdictStatus.PASS for v in verdicts),
            failed=sum(v.status is VerdictStatus.FAIL for v in verdicts),
            inapplicable=sum(v.status is VerdictStatus.INAPPLICABLE for v in verdicts),
        )


class SweepClassification(str, Enum):
    ATTRACTOR = "attractor"
    PERSISTENT = "persistent"
    FAILED = "failed"


class SweepPointResult(BaseModel):
    index: int
    values: dict[str, float]
    margin: float
    ratio: float
    classification: SweepClassification
    message: str | None = None


class SweepSummary(BaseModel):
    total: int
    attractor: int
    persistent: int
    failed: int


class SweepResult(BaseModel):
    axes: list[str]
    points: list[SweepPointResult]
    summary: SweepSummary
