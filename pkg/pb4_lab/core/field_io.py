"""
CSV dump format for scalar fields.

Line 1 names the grid keys, line 2 holds their values, then one line per
grid row (ny lines of nx values each). Floats are written with repr so a
load reproduces the dump exactly.
"""
import csv
import io
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from ..types.exceptions import ConfigurationError
from .grid import Grid2D, ScalarField

HEADER = ["nx", "ny", "x_min", "x_max", "y_min", "y_max", "periodic_x", "periodic_y"]

Target = Union[str, Path, TextIO]


def _write(field: ScalarField, stream: TextIO) -> None:
    g = field.grid
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADER)
    writer.writerow(
        [g.nx, g.ny, repr(g.x_min), repr(g.x_max), repr(g.y_min), repr(g.y_max),
         str(g.periodic_x).lower(), str(g.periodic_y).lower()]
    )
    for row in field.values:
        writer.writerow([repr(float(v)) for v in row])


def dump_field(field: ScalarField, target: Target) -> None:
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as stream:
            _write(field, stream)
    else:
        _write(field, target)


def dumps_field(field: ScalarField) -> str:
    buffer = io.StringIO()
    _write(field, buffer)
    return buffer.getvalue()


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered not in ("true", "false"):
        raise ConfigurationError(f"Expected true/false, got: {text}")
    return lowered == "true"


def _read(stream: TextIO) -> ScalarField:
    rows = [row for row in csv.reader(stream) if row]
    if len(rows) < 2 or [cell.strip() for cell in rows[0]] != HEADER:
        raise ConfigurationError(f"field dump must start with header {','.join(HEADER)}")
    meta = rows[1]
    try:
        grid = Grid2D(
            x_min=float(meta[2]), x_max=float(meta[3]), y_min=float(meta[4]), y_max=float(meta[5]),
            nx=int(meta[0]), ny=int(meta[1]),
            periodic_x=_parse_bool(meta[6]), periodic_y=_parse_bool(meta[7]),
        )
    except (IndexError, ValueError) as exc:
        raise ConfigurationError(f"malformed grid line: {','.join(meta)}") from exc
    body = rows[2:]
    if len(body) != grid.ny or any(len(row) != grid.nx for row in body):
        raise ConfigurationError(f"expected {grid.ny} rows of {grid.nx} values")
    try:
        values = np.array([[float(v) for v in row] for row in body])
    except ValueError as exc:
        raise ConfigurationError(f"non-numeric value in field dump: {exc}") from exc
    return ScalarField(grid, values)


def load_field(source: Target) -> ScalarField:
    if isinstance(source, (str, Path)):
        with open(source, newline="") as stream:
            return _read(stream)
    return _read(source)


def loads_field(text: str) -> ScalarField:
    return _read(io.StringIO(text))
