"""Path queries on a :class:`Network`: k fastest loopless paths, fastest times,
station radius search."""
from __future__ import annotations

import heapq
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..geo import Point, Polyline
from .network import Network, NetworkError, Station
from .spatial import StationGrid


@dataclass(frozen=True)
class Trajectory:
    node_ids: tuple[int, ...]
    polyline: Polyline
    length: float
    travel_time: float

    def to_dict(self) -> dict:
        return {
            "node_ids": list(self.node_ids),
            "vertices": [[p.x, p.y] for p in self.polyline.vertices],
            "cumulative_km": list(self.polyline.cumulative_km),
            "length_km": self.length,
            "travel_h": self.travel_time,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trajectory":
        return cls(
            node_ids=tuple(int(x) for x in d["node_ids"]),
            polyline=Polyline(tuple(Point(float(x), float(y)) for x, y in d["vertices"]), tuple(d["cumulative_km"])),
            length=float(d["length_km"]),
            travel_time=float(d["travel_h"]),
        )


def make_trajectory(net: Network, node_ids) -> Trajectory:
    node_ids = tuple(int(v) for v in node_ids)
    if len(node_ids) < 2:
        raise NetworkError("a trajectory needs at least two nodes")
    cum = [0.0]
    for a, b in zip(node_ids, node_ids[1:]):
        cum.append(cum[-1] + net.length_between(a, b))
    poly = Polyline(tuple(net.points[v] for v in node_ids), tuple(cum))
    return Trajectory(node_ids, poly, cum[-1], cum[-1] / net.speed)


class _LRU:
    def __init__(self, size: int):
        self.size = size
        self.data: OrderedDict = OrderedDict()
        self.lock = threading.Lock()

    def get(self, key, make):
        with self.lock:
            if key in self.data:
                self.data.move_to_end(key)
                return self.data[key]
        value = make()
        with self.lock:
            self.data[key] = value
            self.data.move_to_end(key)
            while len(self.data) > self.size:
                self.data.popitem(last=False)
        return value


class Router:
    """Query engine over an immutable network.  Thread-safe: the only shared
    mutable state is the single-source result cache."""

    def __init__(self, net: Network, cache_size: int = 256, grid_cell_km: float = 10.0):
        self.net = net
        self.indptr, self.indices, self.weights = net.csr
        self._sssp = _LRU(cache_size)
        self.grid = StationGrid([(s.id, net.points[s.node_id]) for s in net.stations], grid_cell_km)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.net.node_count:
            raise NetworkError(f"unknown node {v}")

    def sssp(self, source: int) -> tuple[np.ndarray, np.ndarray]:
        self._check(source)
        return self._sssp.get(source, lambda: kernels.sssp(self.indptr, self.indices, self.weights, source))

    def _path_from_tree(self, source: int, target: int) -> list[int]:
        _, pred = self.sssp(source)
        out = []
        x = target
        while x != -1:
            out.append(int(x))
            x = pred[x]
        out.reverse()
        return out

    def fastest_length(self, o: int, d: int) -> float | None:
        self._check(o)
        self._check(d)
        if o == d:
            return 0.0
        dist, _ = self.sssp(d)  # undirected: distance to d from anywhere
        val = float(dist[o])
        return val if math.isfinite(val) else None

    def fastest_time(self, o: int, d: int) -> float | None:
        length = self.fastest_length(o, d)
        return None if length is None else length / self.net.speed

    def k_fastest_paths(self, o: int, d: int, k: int) -> list[Trajectory]:
        if k < 1:
            raise ValueError("k must be >= 1")
        self._check(o)
        self._check(d)
        if o == d:
            raise ValueError("origin equals destination")
        return [make_trajectory(self.net, p) for _, p in self.k_shortest_node_paths(o, d, k)]

    def k_shortest_node_paths(self, o: int, d: int, k: int) -> list[tuple[float, tuple[int, ...]]]:
        """Yen's deviation search ordered by (length, node sequence)."""
        h, _ = self.sssp(d)
        if not math.isfinite(h[o]):
            return []
        if k == 1:
            dist, _ = self.sssp(o)
            return [(float(dist[d]), tuple(self._path_from_tree(o, d)))]
        n = self.net.node_count
        blocked = np.zeros(n, dtype=np.uint8)
        cost, first = kernels.astar(self.indptr, self.indices, self.weights, o, d, h, blocked, ())
        accepted: list[tuple[float, tuple[int, ...]]] = [(float(cost), tuple(first))]
        seen = {accepted[0][1]}
        candidates: list[tuple[float, tuple[int, ...]]] = []
        while len(accepted) < k:
            _, prev = accepted[-1]
            root_cost = 0.0
            for i in range(len(prev) - 1):
                spur = prev[i]
                root = prev[: i + 1]
                hops = {p[i + 1] for _, p in accepted if len(p) > i + 1 and p[: i + 1] == root}
                blocked[list(root[:-1])] = 1
                spur_cost, spur_path = kernels.astar(
                    self.indptr, self.indices, self.weights, spur, d, h, blocked, tuple(sorted(hops))
                )
                blocked[list(root[:-1])] = 0
                if spur_path:
                    total = root[:-1] + tuple(spur_path)
                    if total not in seen:
                        seen.add(total)
                        heapq.heappush(candidates, (root_cost + float(spur_cost), total))
                root_cost += self.net.length_between(prev[i], prev[i + 1])
            if not candidates:
                break
            accepted.append(heapq.heappop(candidates))
        return accepted

    def radius_stations(self, center: Point, radius: float) -> list[Station]:
        by_id = self.net.station_by_id
        return [by_id[i] for i in self.grid.within(center, radius)]
