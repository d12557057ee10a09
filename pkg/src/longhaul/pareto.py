"""Bi-objective dominance on (fuel cost, duration) and non-dominated filtering."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence


@dataclass(frozen=True, order=True)
class ObjectiveVector:
    fuel_cost: float
    duration: float

    def __post_init__(self):
        for v in (self.fuel_cost, self.duration):
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"objective values must be finite and nonnegative: {self}")


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    return (
        a.fuel_cost <= b.fuel_cost
        and a.duration <= b.duration
        and (a.fuel_cost < b.fuel_cost or a.duration < b.duration)
    )


def weakly_dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    return a.fuel_cost <= b.fuel_cost and a.duration <= b.duration


def _payload_key(payload: Any):
    pid = getattr(payload, "id", payload)
    return (0, pid) if isinstance(pid, (int, float)) else (1, str(pid))


def pareto_filter(points: Sequence[tuple[ObjectiveVector, Any]]) -> list[tuple[ObjectiveVector, Any]]:
    """Points not dominated by any other, sorted by (fuel, duration, payload id).

    Identical vectors are all kept.  Sweep over fuel-sorted points: a point
    survives iff its duration beats every duration seen at strictly lower
    fuel, and ties the minimum among equal-fuel points.
    """
    ordered = sorted(points, key=lambda p: (p[0].fuel_cost, p[0].duration, _payload_key(p[1])))
    out = []
    best = math.inf  # min duration over strictly cheaper points
    i = 0
    n = len(ordered)
    while i < n:
        j = i
        fuel = ordered[i][0].fuel_cost
        while j < n and ordered[j][0].fuel_cost == fuel:
            j += 1
        group_min = ordered[i][0].duration  # sorted by duration within a fuel value
        if group_min < best:
            out.extend(p for p in ordered[i:j] if p[0].duration == group_min)
            best = group_min
        i = j
    return out


def hypervolume(front: Sequence[ObjectiveVector], ref: ObjectiveVector) -> float:
    """Area dominated by ``front`` and bounded by the reference point."""
    pts = sorted({(p.fuel_cost, p.duration) for p in front if p.fuel_cost < ref.fuel_cost and p.duration < ref.duration})
    area = 0.0
    best = ref.duration
    for f, d in pts:
        if d < best:
            area += (ref.fuel_cost - f) * (best - d)
            best = d
    return area
