"""CSV tables and JSON reports, written to a path or a stream"""
import csv
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from pydantic import BaseModel

Target = Union[str, Path, TextIO, None]

CONVERGENCE_HEADER = ["epsilon", "C", "norm", "formula", "ratio"]
DECAY_HEADER = ["alpha", "grad_lq_q", "field_lq_q"]
HISTORY_HEADER = ["iter", "objective", "step"]


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(rows: Sequence[BaseModel], header: Sequence[str], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        data = row.model_dump()
        writer.writerow([_cell(data[key]) for key in header])


def write_table(rows: Sequence[BaseModel], header: Sequence[str], target: Target = None) -> None:
    """One CSV line per record, columns in header order; floats keep full precision"""
    if target is None:
        _write_rows(rows, header, sys.stdout)
    elif isinstance(target, (str, Path)):
        with open(target, "w", newline="") as stream:
            _write_rows(rows, header, stream)
    else:
        _write_rows(rows, header, target)


def write_report(record: BaseModel, target: Target = None, indent: Optional[int] = 2) -> None:
    text = record.model_dump_json(indent=indent)
    if target is None:
        sys.stdout.write(text + "\n")
    elif isinstance(target, (str, Path)):
        Path(target).write_text(text + "\n")
    else:
        target.write(text + "\n")


def write_value(value: float, target: Target = None) -> None:
    """A single number on its own line; whole numbers print without a fraction"""
    value = float(value)
    text = f"{value:g}\n" if value.is_integer() else f"{value!r}\n"
    if target is None:
        sys.stdout.write(text)
    elif isinstance(target, (str, Path)):
        Path(target).write_text(text)
    else:
        target.write(text)
