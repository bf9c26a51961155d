"""Read and write instance CSV files (header ``r1,...,rm``, one row per agent)."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from src.core.errors import EmptyInstance, NonPositiveDemand, ParseError
from src.core.model import Instance, normalize


def _expected_header(m: int) -> list[str]:
    return [f"r{r}" for r in range(1, m + 1)]


def parse_instance_text(text: str, source: str = "<string>") -> Instance:
    reader = csv.reader(io.StringIO(text))
    header: list[str] | None = None
    rows: list[list[float]] = []

    for line_number, record in enumerate(reader, 1):
        cells = [cell.strip() for cell in record]
        if not cells or all(not cell for cell in cells):
            continue
        if header is None:
            header = cells
            if len(header) < 2 or header != _expected_header(len(header)):
                raise ParseError(f"header must be r1,...,rm with m >= 2, got {','.join(header)}", source, line_number)
            continue
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} values, got {len(cells)}", source, line_number)
        values: list[float] = []
        for cell in cells:
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", source, line_number) from None
            if not math.isfinite(value) or value <= 0.0:
                raise ParseError(f"demands must be positive and finite, got {cell!r}", source, line_number)
            values.append(value)
        rows.append(values)

    if header is None:
        raise ParseError("missing header row", source, 1)
    if not rows:
        raise EmptyInstance(f"{source}: no agent rows")
    try:
        return normalize(rows)
    except NonPositiveDemand as exc:
        raise ParseError(str(exc), source) from exc


def read_instance_csv(path: Path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read instance file: {exc.strerror or exc}", str(path)) from exc
    return parse_instance_text(text, source=str(path))


def format_instance_csv(instance: Instance) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_expected_header(instance.m))
    for row in instance.demands:
        writer.writerow([repr(float(value)) for value in row])
    return buffer.getvalue()


def write_instance_csv(instance: Instance, path: Path) -> Path:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_instance_csv(instance), encoding="utf-8")
    return target

