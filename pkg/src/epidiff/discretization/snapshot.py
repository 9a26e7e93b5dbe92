"""Plain-text field snapshots.

A snapshot holds one species on one grid at one time::

    epidiff-field v1; 2; 64 64; 0.015625 0.015625; S; 1.5
    0.99999999999999989
    ...

The header lists dimension, cells per axis, spacing per axis, species and
time; then one value per cell follows in row-major order. Every float is
written with 17 significant digits so a write/read cycle is bit-exact.
"""

from pathlib import Path
from typing import NamedTuple

import numpy as np

from epidiff.discretization.grid import Field, Grid
from epidiff.errors import ConfigurationError
from epidiff.types import Species

MAGIC = "epidiff-field v1"
_HEADER_PARTS = 6


class Snapshot(NamedTuple):
    field: Field
    species: Species
    time: float


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def format_snapshot(field: Field, species: Species, time: float) -> str:
    grid = field.grid
    header = "; ".join(
        [
            MAGIC,
            str(grid.dim),
            " ".join(str(n) for n in grid.cells),
            " ".join(_fmt(h) for h in grid.spacing),
            species.value,
            _fmt(time),
        ],
    )
    body = "\n".join(_fmt(v) for v in field.values.ravel())
    return f"{header}\n{body}\n"


def parse_snapshot(text: str) -> Snapshot:
    """Parse snapshot text back into a field.

    Raises:
        ConfigurationError: If the header or the number of values is wrong.
    """
    lines = text.splitlines()
    if not lines:
        msg = "empty snapshot"
        raise ConfigurationError(msg)
    parts = [part.strip() for part in lines[0].split(";")]
    if len(parts) != _HEADER_PARTS or parts[0] != MAGIC:
        msg = f"not an epidiff field snapshot header: {lines[0]!r}"
        raise ConfigurationError(msg)
    dim = int(parts[1])
    cells = tuple(int(n) for n in parts[2].split())
    spacing = tuple(float(h) for h in parts[3].split())
    if len(cells) != dim or len(spacing) != dim:
        msg = f"snapshot header declares dimension {dim} but lists {len(cells)} axes"
        raise ConfigurationError(msg)
    grid = Grid(cells=cells, spacing=spacing)
    values = np.array([float(v) for v in lines[1:] if v.strip()], dtype=np.float64)
    if values.size != grid.size:
        msg = f"snapshot holds {values.size} values, grid needs {grid.size}"
        raise ConfigurationError(msg)
    return Snapshot(Field(values.reshape(cells), grid), Species(parts[4]), float(parts[5]))


def write_snapshot(path: Path, field: Field, species: Species, time: float) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_snapshot(field, species, time), encoding="ascii")
    return path


def read_snapshot(path: Path) -> Snapshot:
    return parse_snapshot(path.read_text(encoding="ascii"))
