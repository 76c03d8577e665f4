"""Inequality check records and their JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 1.0 if lhs == 0.0 else float("inf")
    return lhs / rhs


@dataclass
class InequalityReport:
    """One verified relation: lhs vs rhs with the satisfaction margin.

    margin is oriented so that positive means the relation holds
    (lhs - rhs for lower bounds, rhs - lhs for upper bounds,
    -|lhs - rhs| for equalities). ratio is always lhs / rhs.
    empirical_constant records the constant that would make the relation
    an equality on this input, for the existential-constant theorems.
    """

    name: str
    lhs: float
    rhs: float
    margin: float
    ratio: float
    empirical_constant: float | None = None
    params: dict = field(default_factory=dict)
    grid: dict | None = None
    seed: int | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "ratio": float(self.ratio),
            "empirical_constant":
                None if self.empirical_constant is None else float(self.empirical_constant),
            "params": _plain(self.params),
            "grid": _plain(self.grid) if self.grid is not None else None,
            "seed": self.seed,
        }
        if self.notes:
            d["notes"] = self.notes
        return d


def lower_bound(name: str, lhs: float, rhs: float, **kw) -> InequalityReport:
    """Relation lhs >= rhs."""
    lhs, rhs = float(lhs), float(rhs)
    return InequalityReport(name, lhs, rhs, lhs - rhs, _ratio(lhs, rhs), **kw)


def upper_bound(name: str, lhs: float, rhs: float, **kw) -> InequalityReport:
    """Relation lhs <= rhs."""
    lhs, rhs = float(lhs), float(rhs)
    return InequalityReport(name, lhs, rhs, rhs - lhs, _ratio(lhs, rhs), **kw)


def equality(name: str, lhs: float, rhs: float, **kw) -> InequalityReport:
    """Relation lhs == rhs up to quadrature error; margin is -|lhs - rhs|."""
    lhs, rhs = float(lhs), float(rhs)
    return InequalityReport(name, lhs, rhs, -abs(lhs - rhs), _ratio(lhs, rhs), **kw)


def _plain(obj):
    """Recursively coerce numpy scalars/arrays so json sees plain Python."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def reports_to_json(reports: list[InequalityReport]) -> str:
    """Deterministic JSON array (sorted keys, repr floats)."""
    return json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2)


def reports_to_csv(reports: list[InequalityReport]) -> str:
    """One row per report; params serialized as a JSON cell."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "lhs", "rhs", "margin", "ratio",
                     "empirical_constant", "seed", "params"])
    for r in reports:
        d = r.to_dict()
        writer.writerow([
            d["name"], repr(d["lhs"]), repr(d["rhs"]), repr(d["margin"]),
            repr(d["ratio"]),
            "" if d["empirical_constant"] is None else repr(d["empirical_constant"]),
            "" if d["seed"] is None else d["seed"],
            json.dumps(d["params"], sort_keys=True),
        ])
    return buf.getvalue()
