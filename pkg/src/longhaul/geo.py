"""Planar geometry: points in km and polylines with running length."""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: ({self.x}, {self.y})")


def euclid_km(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class Polyline:
    """Ordered vertices plus the running length at each vertex.

    ``cumulative_km`` defaults to Euclidean segment lengths.  A caller may
    pass its own running lengths (e.g. road lengths that exceed the straight
    line); each step must be at least the segment's Euclidean length.
    """

    vertices: tuple[Point, ...]
    cumulative_km: tuple[float, ...] = field(default=())

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(verts) < 2:
            raise ValueError("a polyline needs at least two vertices")
        object.__setattr__(self, "vertices", verts)
        if not self.cumulative_km:
            cum = [0.0]
            for a, b in zip(verts, verts[1:]):
                cum.append(cum[-1] + euclid_km(a, b))
            object.__setattr__(self, "cumulative_km", tuple(cum))
        else:
            cum = tuple(float(c) for c in self.cumulative_km)
            if len(cum) != len(verts):
                raise ValueError("cumulative_km must have one entry per vertex")
            if cum[0] != 0.0:
                raise ValueError("cumulative_km must start at 0")
            for i in range(1, len(cum)):
                step = cum[i] - cum[i - 1]
                if step < 0:
                    raise ValueError("cumulative_km must be nondecreasing")
                if step + 1e-9 < euclid_km(verts[i - 1], verts[i]):
                    raise ValueError("segment running length shorter than its chord")
            object.__setattr__(self, "cumulative_km", cum)

    @property
    def length(self) -> float:
        return self.cumulative_km[-1]


def point_along(p: Polyline, s: float) -> Point:
    """Point at running length ``s``, interpolated on the containing segment."""
    total = p.length
    if s < 0 or s > total or math.isnan(s):
        raise ValueError(f"position {s} outside [0, {total}]")
    cum = p.cumulative_km
    if s == total:
        return p.vertices[-1]
    # first vertex strictly beyond s closes the containing segment
    i = bisect.bisect_right(cum, s)
    a, b = p.vertices[i - 1], p.vertices[i]
    span = cum[i] - cum[i - 1]
    if span == 0.0:
        return a
    t = (s - cum[i - 1]) / span
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def polyline_from(points: Sequence[tuple[float, float]]) -> Polyline:
    return Polyline(tuple(Point(x, y) for x, y in points))
