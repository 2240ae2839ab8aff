"""Per-iteration records and their CSV form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

OBJECTIVE_STEP = "objective-step"
FEASIBILITY_STEP = "feasibility-step"
CONVERGED = "converged"

BASE_COLUMNS = ("k", "f", "viol", "step", "dist", "inner")


@dataclass
class TraceRow:
    """One iteration.

    ``dist`` is the distance that drove the step (farthest supporting
    halfspace distance); ``x`` is the iterate after the step.  Optional
    fields stay ``None`` when an algorithm has no use for them.
    """

    k: int
    f: float
    viol: float
    step: str
    dist: float = 0.0
    inner: int = 0
    h: float | None = None
    sweep2: float | None = None
    err_bound: float | None = None
    x: np.ndarray | None = None
    extra: dict = field(default_factory=dict)


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class IterateTrace:
    """Ordered stream of :class:`TraceRow` with strictly increasing ``k``."""

    def __init__(self, extra_columns=()):
        self.rows = []
        self.extra_columns = tuple(extra_columns)
        self.converged = False
        self.info = {}

    def append(self, row):
        if self.rows and row.k <= self.rows[-1].k:
            raise ValueError(f"trace index {row.k} does not increase")
        self.rows.append(row)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def column(self, name):
        if name in ("k", "inner"):
            return np.array([getattr(r, name) for r in self.rows], dtype=int)
        if name == "step":
            return [r.step for r in self.rows]
        if name == "x":
            return np.array([r.x for r in self.rows])
        vals = [getattr(r, name) if hasattr(r, name) else r.extra.get(name) for r in self.rows]
        return np.array([np.nan if v is None else v for v in vals], dtype=float)

    @property
    def last(self):
        return self.rows[-1] if self.rows else None

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = BASE_COLUMNS + self.extra_columns
        w.writerow(cols)
        for r in self.rows:
            vals = []
            for c in cols:
                v = getattr(r, c) if hasattr(r, c) else r.extra.get(c)
                vals.append(fmt(v))
            w.writerow(vals)
        return buf.getvalue()

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())
