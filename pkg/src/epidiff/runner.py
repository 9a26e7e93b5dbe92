"""Run orchestration for the four CLI modes and their artifacts.

Exit codes: 0 success or all applicable suites passed, 1 a suite failed,
2 configuration error, 3 numerical abort.
"""

import logging
import math
from enum import IntEnum
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from epidiff.config import ConfigDocument, build_config, dump_config, load_preset_text, parse_document
from epidiff.diagnostics.writers import write_diagnostics, write_report, write_sweep, write_verdicts
from epidiff.discretization.grid import State
from epidiff.discretization.snapshot import write_snapshot
from epidiff.errors import ConfigurationError, NumericalAbort, SolverError
from epidiff.model.result import DiagnosticsRecord, SweepClassification, VerdictStatus
from epidiff.registry import run_suites
from epidiff.settings import settings
from epidiff.solver.steady import solve_steady, steady_problem_for
from epidiff.solver.stepper import run
from epidiff.sweep import run_sweep
from epidiff.types import RunMode, Species
from epidiff.verification.common import SuiteOptions

logger = logging.getLogger(__name__)

CONFIG_ECHO = "config.toml"
DIAGNOSTICS_CSV = "diagnostics.csv"
VERDICTS_REPORT = "verdicts.txt"
SWEEP_CSV = "sweep.csv"
STEADY_SNAPSHOT = "s_infinity.txt"
STEADY_REPORT = "steady_report.txt"


class ExitCode(IntEnum):
    SUCCESS = 0
    VERIFICATION_FAILURE = 1
    CONFIGURATION_ERROR = 2
    NUMERICAL_ABORT = 3


class RunSpec(BaseModel):
    """One CLI invocation: a mode, a configuration source and output controls."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: RunMode
    config_path: Path | None = None
    preset: str | None = None
    output_dir: Path
    cadence: int = Field(default=10, ge=1)
    seed: int = 0
    threads: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> "RunSpec":
        if (self.config_path is None) == (self.preset is None):
            msg = "give exactly one of a configuration path or a preset name"
            raise ValueError(msg)
        return self

    def read_config(self) -> str:
        if self.preset is not None:
            return load_preset_text(self.preset)
        path = self.config_path
        if path is None or not path.is_file():
            msg = f"configuration file {path} does not exist"
            raise ConfigurationError(msg)
        return path.read_text(encoding="utf-8")


class SnapshotWriter:
    """Observer writing one snapshot file per species."""

    def __init__(self, output_dir: Path) -> None:
        self.output_dir = output_dir
        self.written: list[Path] = []

    def __call__(self, index: int, t: float, Z: State, record: DiagnosticsRecord) -> None:  # noqa: ARG002
        for species, field in Z.named():
            path = self.output_dir / f"snapshot_{index:06d}_{species.value}.txt"
            self.written.append(write_snapshot(path, field, species, t))


def _prepare_output(spec: RunSpec) -> None:
    try:
        spec.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        msg = f"output directory {spec.output_dir} is not writable: {exc}"
        raise ConfigurationError(msg) from exc


def _simulate(doc: ConfigDocument, spec: RunSpec) -> ExitCode:
    cfg = build_config(doc)
    writer = SnapshotWriter(spec.output_dir)
    result = run(cfg, [writer], spec.cadence)
    write_diagnostics(spec.output_dir / DIAGNOSTICS_CSV, result.series)
    logger.info("simulate: %d snapshot files in %s", len(writer.written), spec.output_dir)
    if not result.completed:
        logger.error("simulate: run aborted: %s", result.message)
        return ExitCode.NUMERICAL_ABORT
    return ExitCode.SUCCESS


def _steady(doc: ConfigDocument, spec: RunSpec) -> ExitCode:
    cfg = build_config(doc)
    problem = steady_problem_for(cfg)
    if problem is None:
        msg = "steady mode needs limit profiles for coefficients.d1 and coefficients.b"
        raise ConfigurationError(msg)
    result = solve_steady(problem)
    s_inf = result.solution
    write_snapshot(spec.output_dir / STEADY_SNAPSHOT, s_inf, Species.S, math.inf)
    ratio = problem.b0_profile.values / problem.d
    write_report(
        spec.output_dir / STEADY_REPORT,
        {
            "iterations": result.iterations,
            "relative_residual": result.residual,
            "tolerance": settings.steady_tol,
            "min_s_infinity": float(s_inf.values.min()),
            "max_s_infinity": float(s_inf.values.max()),
            "min_b0_over_d": float(np.min(ratio)),
            "max_b0_over_d": float(np.max(ratio)),
        },
    )
    return ExitCode.SUCCESS


def _verify(doc: ConfigDocument, spec: RunSpec) -> ExitCode:
    cfg = build_config(doc)
    options = SuiteOptions(
        seeds=settings.nonnegativity_seeds,
        base_seed=spec.seed,
        threads=spec.threads,
        t_end=settings.nonnegativity_t_end,
    )
    verdicts = run_suites(cfg, options)
    write_verdicts(spec.output_dir / VERDICTS_REPORT, verdicts)
    if any(v.status is VerdictStatus.FAIL for v in verdicts):
        return ExitCode.VERIFICATION_FAILURE
    return ExitCode.SUCCESS


def _sweep(doc: ConfigDocument, spec: RunSpec) -> ExitCode:
    result = run_sweep(doc, threads=spec.threads)
    write_sweep(spec.output_dir / SWEEP_CSV, result)
    if any(p.classification is SweepClassification.FAILED for p in result.points):
        return ExitCode.NUMERICAL_ABORT
    return ExitCode.SUCCESS


def run_cli(spec: RunSpec) -> ExitCode:
    """Execute one CLI invocation and map its outcome to an exit code."""
    try:
        doc = parse_document(spec.read_config())
        _prepare_output(spec)
        (spec.output_dir / CONFIG_ECHO).write_text(dump_config(doc), encoding="utf-8")
        match spec.mode:
            case RunMode.SIMULATE:
                return _simulate(doc, spec)
            case RunMode.STEADY:
                return _steady(doc, spec)
            case RunMode.VERIFY:
                return _verify(doc, spec)
            case RunMode.SWEEP:
                return _sweep(doc, spec)
    except ConfigurationError as exc:
        logger.error("configuration error: %s", exc)  # noqa: TRY400
        return ExitCode.CONFIGURATION_ERROR
    except (NumericalAbort, SolverError) as exc:
        logger.error("numerical abort: %s", exc)  # noqa: TRY400
        return ExitCode.NUMERICAL_ABORT
