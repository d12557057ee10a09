"""Uniform-grid index for closed-ball station queries."""
from __future__ import annotations

import math
from collections import defaultdict

from ..geo import Point, euclid_km


class StationGrid:
    def __init__(self, items: list[tuple[int, Point]], cell_km: float = 10.0):
        if cell_km <= 0:
            raise ValueError("cell size must be positive")
        self.cell = cell_km
        self.items = list(items)
        self._cells: dict[tuple[int, int], list[tuple[int, Point]]] = defaultdict(list)
        for key, p in self.items:
            self._cells[self._cell_of(p.x, p.y)].append((key, p))

    def _cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (math.floor(x / self.cell), math.floor(y / self.cell))

    def within(self, center: Point, radius: float) -> list[int]:
        """Keys whose point lies at Euclidean distance <= radius, sorted."""
        if radius < 0:
            raise ValueError("negative radius")
        # one extra cell of slack absorbs rounding at cell borders
        x0, y0 = self._cell_of(center.x - radius, center.y - radius)
        x1, y1 = self._cell_of(center.x + radius, center.y + radius)
        out = []
        for cx in range(x0 - 1, x1 + 2):
            for cy in range(y0 - 1, y1 + 2):
                for key, p in self._cells.get((cx, cy), ()):
                    if euclid_km(center, p) <= radius:
                        out.append(key)
        out.sort()
        return out

    def scan(self, center: Point, radius: float) -> list[int]:
        """Linear reference scan, same semantics as :meth:`within`."""
        return sorted(k for k, p in self.items if euclid_km(center, p) <= radius)
