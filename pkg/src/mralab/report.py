"""Check records, reports and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .kernels import BACKEND

SCHEMA_VERSION = 1
STATUSES = ("pass", "fail", "reported")


@dataclass
class Record:
    id: str
    inputs: dict
    value: Any
    status: str
    tolerance: float | None = None
    # simulated state path; exported to CSV only
    path: list[int] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")


def check(id: str, inputs: dict, value: float, tol: float, cmp: str = "<") -> Record:
    """Hard check: pass when ``value cmp tol`` (NaN fails)."""
    v = float(value)
    ok = (v < tol) if cmp == "<" else (v <= tol)
    return Record(id, inputs, v, "pass" if ok and not math.isnan(v) else "fail", tol)


def assertion(id: str, inputs: dict, ok: bool, value: Any = None) -> Record:
    return Record(id, inputs, value if value is not None else bool(ok), "pass" if ok else "fail")


def reported(id: str, inputs: dict, value: Any, tol: float | None = None) -> Record:
    return Record(id, inputs, value, "reported", tol)


@dataclass
class Report:
    suite: str
    params: dict
    records: list[Record] = field(default_factory=list)
    paths: dict[str, list[int]] = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = f"v{__version__}"

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=lambda r: r.id)

    @property
    def failed(self) -> list[Record]:
        return [r for r in self.records if r.status == "fail"]

    def counts(self) -> dict:
        return {s: sum(r.status == s for r in self.records) for s in STATUSES}


def _plain(x):
    # normalize numpy scalars / arrays / tuples to JSON-ready Python values
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    return x


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return "%.17g" % v


def _dump(x, indent: int, level: int = 0) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{_dump(str(k), indent)}: {_dump(v, indent, level + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, list):
        if not x:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in x):
            return "[" + ", ".join(_dump(v, indent) for v in x) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent, level + 1) for v in x) + "\n" + end + "]"
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return _fmt_float(x)
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def report_document(rep: Report, include_wall_time: bool = True) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "suite": rep.suite,
        "version": rep.version,
        "backend": BACKEND,
        "params": _plain(dict(sorted(rep.params.items()))),
        "summary": rep.counts(),
        "records": [
            {
                "id": r.id,
                "inputs": _plain(r.inputs),
                "value": _plain(r.value),
                "tolerance": _plain(r.tolerance),
                "status": r.status,
            }
            for r in rep.sorted_records()
        ],
    }
    frames = {r.id: _plain(r.value) for r in rep.sorted_records() if r.id.startswith("frames.")}
    if frames:
        doc["frames"] = frames
    if include_wall_time:
        doc["wall_time"] = float(rep.wall_time)
    return doc


def to_json(rep: Report, include_wall_time: bool = True) -> str:
    """JSON text with floats written as %.17g and records sorted by id."""
    return _dump(report_document(rep, include_wall_time), 2) + "\n"


def to_csv_summary(rep: Report) -> str:
    """One row per record, then a step,state table for every simulated path."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "status", "value", "tolerance"])
    for r in rep.sorted_records():
        v = r.value
        if isinstance(v, (float, np.floating)):
            v = "%.17g" % v
        elif not isinstance(v, (int, str, bool)):
            v = _dump(_plain(v), 0).replace("\n", "")
        tol = "" if r.tolerance is None else "%.17g" % r.tolerance
        w.writerow([r.id, r.status, v, tol])
    for name in sorted(rep.paths):
        buf.write(f"\n# path {name}\n")
        w.writerow(["step", "state"])
        for n, s in enumerate(rep.paths[name]):
            w.writerow([n, s])
    return buf.getvalue()
