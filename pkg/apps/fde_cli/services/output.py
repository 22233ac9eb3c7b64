"""
Deterministic CSV/JSON writers. Files are replaced atomically.
"""

import csv
import io
import json
import os
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

from pydantic import BaseModel

from fdesic.rfmodel import ComplexResponse


RESPONSE_HEADER = ("freq_hz", "re", "im", "mag_db", "phase_deg")


def fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_text(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="") as f:
        f.write(text)
    os.replace(tmp, path)


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    write_text(path, buffer.getvalue())


def write_json(path: Union[str, Path], payload: Union[BaseModel, dict]) -> None:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_csv_dicts(path: Union[str, Path]) -> list[dict[str, str]]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def response_rows(response: ComplexResponse) -> list[tuple[float, float, float, float, float]]:
    mag_db = response.magnitude_db()
    phase_deg = response.phase_deg()
    return [
        (float(f), float(v.real), float(v.imag), float(m), float(p))
        for f, v, m, p in zip(response.freqs_hz, response.values, mag_db, phase_deg)
    ]
