# vlft_lab/sweep/csv_io.py
import csv
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, TextIO, Union

from vlft_lab.schemas.sweep import CSV_COLUMNS, SweepRow


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_rows(rows: Iterable[SweepRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([format_value(getattr(row, col)) for col in CSV_COLUMNS])


def emit_csv(rows: Iterable[SweepRow], path: Union[str, Path]) -> Path:
    """Header plus one line per row, numbers at 12 significant digits, UTF-8, '\\n' endings."""
    path = Path(path)
    try:
        if not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            write_rows(rows, f)
    except OSError as e:
        raise type(e)(e.errno, f"cannot write CSV: {e.strerror}", str(path)) from e
    return path


def read_csv(path: Union[str, Path]) -> list[SweepRow]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    with path.open("r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            SweepRow.model_validate({k: (v if v != "" else None) for k, v in record.items()})
            for record in reader
        ]
