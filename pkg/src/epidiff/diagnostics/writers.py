"""CSV and plain-text emission of diagnostics, verdicts and sweeps.

Floats are written with 17 significant digits so identical runs produce
byte-identical files.
"""

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

import pandas as pd

from epidiff.model.result import DiagnosticsRecord, SweepResult, VerificationVerdict

logger = logging.getLogger(__name__)

DIAGNOSTICS_COLUMNS = (
    "t",
    "mass_S",
    "mass_I",
    "mass_R",
    "mass_B",
    "Y3",
    "Y4",
    "J1",
    "J2",
    "J3",
    "J4",
    "J",
    "envelope",
    "min_S",
    "min_I",
    "min_R",
    "min_B",
)
FLOAT_FORMAT = "%.17g"


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _write_frame(path: Path, frame: pd.DataFrame) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    logger.info("wrote %s", path)
    return path


def diagnostics_frame(records: Sequence[DiagnosticsRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.row() for r in records], columns=list(DIAGNOSTICS_COLUMNS), dtype="float64")


def write_diagnostics(path: Path, records: Sequence[DiagnosticsRecord]) -> Path:
    return _write_frame(path, diagnostics_frame(records))


def read_diagnostics(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def format_verdicts(verdicts: Sequence[VerificationVerdict]) -> str:
    """One line per criterion: suite | criterion | measured | threshold | status."""
    lines = []
    for verdict in verdicts:
        for criterion in verdict.criteria:
            status = criterion.status.value.upper()
            if criterion.informational:
                status += " (informational)"
            lines.append(
                f"{verdict.suite} | {criterion.name} | measured={_fmt(criterion.measured)} "
                f"| threshold={_fmt(criterion.threshold)} | {status}",
            )
        if verdict.message:
            lines.append(f"{verdict.suite} | note | {verdict.message}")
        lines.append(f"{verdict.suite} | verdict | {verdict.status.value.upper()}")
    return "\n".join(lines) + "\n"


def write_verdicts(path: Path, verdicts: Sequence[VerificationVerdict]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_verdicts(verdicts), encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    rows = [
        {
            "index": point.index,
            **{name: point.values[name] for name in result.axes},
            "margin": point.margin,
            "ratio": point.ratio,
            "classification": point.classification.value,
        }
        for point in result.points
    ]
    return pd.DataFrame(rows, columns=["index", *result.axes, "margin", "ratio", "classification"])


def write_sweep(path: Path, result: SweepResult) -> Path:
    return _write_frame(path, sweep_frame(result))


def write_report(path: Path, entries: Mapping[str, object]) -> Path:
    """Write ``key = value`` lines, floats at full precision."""
    lines = [f"{key} = {_fmt(value) if isinstance(value, float) else value}" for key, value in entries.items()]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path
