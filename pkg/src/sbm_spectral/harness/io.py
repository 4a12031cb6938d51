"""CSV rows for frontier and experiment output."""
from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from pathlib import Path

HEADER = ("method", "n", "a", "b", "k_or_seed", "gamma", "sin_theta", "aux1", "aux2")


@dataclass(frozen=True)
class Row:
    method: str
    n: int
    a: float
    b: float
    k_or_seed: int
    gamma: float
    sin_theta: float
    aux1: float | None = None
    aux2: float | None = None

    @classmethod
    def from_point(cls, p, aux2=None) -> "Row":
        key = p.k if p.k is not None else (p.rep if p.rep is not None else 0)
        if aux2 is None and p.rep is not None:
            aux2 = float(p.rep)
        return cls(p.method, p.n, p.a, p.b, key, p.gamma, p.sin_theta, p.cos_theta, aux2)


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def format_row(row, header=HEADER) -> list[str]:
    if isinstance(row, dict):
        return [fmt(row.get(h)) for h in header]
    return [fmt(getattr(row, h)) for h in header]


def write_csv(rows, path, header=HEADER) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(format_row(row, header))


def _parse(name, text):
    if text == "":
        return None
    if name == "method":
        return text
    if name in ("n", "k_or_seed"):
        return int(text)
    return float(text)


def read_csv(path) -> list[Row]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        names = [f.name for f in fields(Row)]
        return [Row(**{k: _parse(k, v) for k, v in zip(names, rec)}) for rec in reader if rec]
