"""
Salida determinista de tablas y reportes.

CSV: UTF-8, coma, fila de encabezado, fin de línea LF, flotantes con 17 cifras
significativas. JSON: un objeto por invocación con `schema_version`.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, FrozenSet, List, Optional, Sequence

import click
from pydantic import BaseModel

from app.models import SCHEMA_VERSION

ANGLE_FIELDS = frozenset({"directions_sq", "directions_st", "conjugate_pair"})


@dataclass
class Table:
    columns: List[str]
    rows: List[Sequence[Any]]
    angle_columns: FrozenSet[str] = field(default_factory=frozenset)

    def in_degrees(self) -> "Table":
        idx = [i for i, c in enumerate(self.columns) if c in self.angle_columns]
        rows = [
            tuple(math.degrees(v) if i in idx else v for i, v in enumerate(r))
            for r in self.rows
        ]
        return Table(self.columns, rows, self.angle_columns)


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def table_to_json(table: Table, command: str) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "columns": table.columns,
        "rows": [list(r) for r in table.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def report_to_json(report: BaseModel, degrees: bool = False) -> str:
    data = report.model_dump(mode="json")
    if degrees:
        for key in ANGLE_FIELDS & data.keys():
            data[key] = [math.degrees(v) for v in data[key]]
    return json.dumps(data, indent=2) + "\n"


def render(result, command: str, output_format: str, degrees: bool = False) -> str:
    """Tablas en CSV o JSON; los reportes (pydantic) siempre en JSON."""
    if isinstance(result, BaseModel):
        return report_to_json(result, degrees)
    if degrees:
        result = result.in_degrees()
    if output_format == "json":
        return table_to_json(result, command)
    return table_to_csv(result)


def write_output(text: str, path: Optional[Path]) -> None:
    if path is None:
        click.echo(text, nl=False)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
