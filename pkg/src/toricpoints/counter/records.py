"""Count records and their CSV form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

FIELDS = ("model_id", "region_id", "T", "N", "millis")


@dataclass(frozen=True)
class CountRecord:
    model_id: str
    region_id: str
    T: int
    N: int
    millis: float = 0.0


def write_csv(records: Iterable[CountRecord], path: str | Path | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in records:
        w.writerow([r.model_id, r.region_id, r.T, r.N, f"{r.millis:.1f}"])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_csv(path: str | Path) -> list[CountRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    missing = set(FIELDS) - set(rows[0] if rows else FIELDS)
    if missing:
        raise ValueError(f"CSV missing columns {sorted(missing)}")
    return [CountRecord(r["model_id"], r["region_id"], int(r["T"]), int(r["N"]), float(r["millis"]))
            for r in rows]


def default_schedule(tmax: int = 10**6, start: int = 1000) -> list[int]:
    """start * 2^k up to tmax, with tmax appended so the span reaches it."""
    out = []
    t = start
    while t <= tmax:
        out.append(t)
        t *= 2
    if not out or out[-1] != tmax:
        out.append(tmax)
    return out
