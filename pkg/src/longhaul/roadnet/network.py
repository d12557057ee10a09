"""Synthetic road networks: generation, validation and the network file format."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import Delaunay

from ..geo import Point, euclid_km

FORMAT_VERSION = 1
DEFAULT_SPEED_KMH = 100.0
# lengths are multiples of 2**-10 km so every path sum is exact in float64
LENGTH_QUANTUM = 1.0 / 1024.0


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class Station:
    id: int
    node_id: int
    price: float

    def __post_init__(self):
        if not self.price > 0:
            raise ValueError(f"station {self.id}: price must be positive")


@dataclass(frozen=True)
class Edge:
    node_a: int
    node_b: int
    length: float


@dataclass(frozen=True)
class NetworkSpec:
    width_km: float = 600.0
    height_km: float = 300.0
    backbone_node_count: int = 60
    local_node_count: int = 440
    station_count: int = 250
    country_band_count: int = 3
    band_base_prices: tuple[float, ...] = (1.45, 1.60, 1.38)
    price_perturbation: float = 0.15
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "band_base_prices", tuple(float(p) for p in self.band_base_prices))
        if self.width_km <= 0 or self.height_km <= 0:
            raise ValueError("rectangle sides must be positive")
        if self.backbone_node_count < 1 or self.local_node_count < 0:
            raise ValueError("node counts must be >= 1 backbone, >= 0 local")
        if self.backbone_node_count + self.local_node_count < 2:
            raise ValueError("a network needs at least two nodes")
        if self.station_count < 0:
            raise ValueError("station_count must be >= 0")
        if self.station_count > self.backbone_node_count + self.local_node_count:
            raise ValueError("more stations than nodes")
        if self.country_band_count < 1:
            raise ValueError("country_band_count must be >= 1")
        if len(self.band_base_prices) != self.country_band_count:
            raise ValueError("need one base price per country band")
        if any(p <= 0 for p in self.band_base_prices):
            raise ValueError("base prices must be positive")
        if not (0 <= self.price_perturbation < 1):
            raise ValueError("price_perturbation must lie in [0, 1)")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["band_base_prices"] = list(self.band_base_prices)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkSpec":
        return cls(**{**d, "band_base_prices": tuple(d["band_base_prices"])})


@dataclass(frozen=True, eq=False)
class Network:
    """Immutable undirected road network with stations on nodes."""

    points: tuple[Point, ...]
    edges: tuple[Edge, ...]
    stations: tuple[Station, ...]
    speed: float = DEFAULT_SPEED_KMH
    spec: NetworkSpec | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.points)
        for e in self.edges:
            if not (0 <= e.node_a < n and 0 <= e.node_b < n) or e.node_a == e.node_b:
                raise NetworkError(f"bad edge {e}")
            if e.length + 1e-9 < euclid_km(self.points[e.node_a], self.points[e.node_b]):
                raise NetworkError(f"edge {e} shorter than its straight line")
        for s in self.stations:
            if not 0 <= s.node_id < n:
                raise NetworkError(f"station {s.id} on unknown node {s.node_id}")
        if [s.id for s in self.stations] != sorted({s.id for s in self.stations}):
            raise NetworkError("station ids must be unique and sorted")
        if self.speed <= 0:
            raise NetworkError("speed must be positive")

    @property
    def node_count(self) -> int:
        return len(self.points)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, weights) with neighbours sorted by node id."""
        n = self.node_count
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for e in self.edges:
            adj[e.node_a].append((e.node_b, e.length))
            adj[e.node_b].append((e.node_a, e.length))
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices, weights = [], []
        for u in range(n):
            nbrs = sorted(adj[u])
            indptr[u + 1] = indptr[u] + len(nbrs)
            indices.extend(v for v, _ in nbrs)
            weights.extend(w for _, w in nbrs)
        return indptr, np.asarray(indices, dtype=np.int64), np.asarray(weights, dtype=np.float64)

    @cached_property
    def edge_length(self) -> dict[tuple[int, int], float]:
        out = {}
        for e in self.edges:
            key = (min(e.node_a, e.node_b), max(e.node_a, e.node_b))
            out[key] = min(out.get(key, math.inf), e.length)
        return out

    def length_between(self, a: int, b: int) -> float:
        try:
            return self.edge_length[(min(a, b), max(a, b))]
        except KeyError:
            raise NetworkError(f"nodes {a} and {b} are not adjacent") from None

    @cached_property
    def station_by_id(self) -> dict[int, Station]:
        return {s.id: s for s in self.stations}

    @cached_property
    def mean_station_price(self) -> float:
        if not self.stations:
            raise NetworkError("network has no stations")
        return math.fsum(s.price for s in self.stations) / len(self.stations)

    def is_connected(self) -> bool:
        if self.node_count <= 1:
            return True
        return _components(self.node_count, [(e.node_a, e.node_b) for e in self.edges]) == 1

    # -- file format -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "network",
            "seed": self.seed,
            "speed_kmh": self.speed,
            "spec": self.spec.to_dict() if self.spec is not None else None,
            "nodes": [{"id": i, "x": p.x, "y": p.y} for i, p in enumerate(self.points)],
            "edges": [{"a": e.node_a, "b": e.node_b, "length_km": e.length} for e in self.edges],
            "stations": [{"id": s.id, "node": s.node_id, "price": s.price} for s in self.stations],
            "extra": self.extra,
        }

    def dumps(self) -> str:
        return dumps_document(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Network":
        if d.get("kind") != "network":
            raise NetworkError("not a network document")
        if d.get("format_version") != FORMAT_VERSION:
            raise NetworkError(f"unsupported network format version {d.get('format_version')}")
        nodes = d["nodes"]
        if [n["id"] for n in nodes] != list(range(len(nodes))):
            raise NetworkError("node ids must be 0..n-1 in order")
        return cls(
            points=tuple(Point(float(n["x"]), float(n["y"])) for n in nodes),
            edges=tuple(Edge(int(e["a"]), int(e["b"]), float(e["length_km"])) for e in d["edges"]),
            stations=tuple(Station(int(s["id"]), int(s["node"]), float(s["price"])) for s in d["stations"]),
            speed=float(d["speed_kmh"]),
            spec=NetworkSpec.from_dict(d["spec"]) if d.get("spec") is not None else None,
            seed=d.get("seed"),
            extra=d.get("extra") or {},
        )

    @classmethod
    def loads(cls, text: str) -> "Network":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "Network":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def dumps_document(doc: dict) -> str:
    """Canonical JSON used for every file the package writes."""
    return json.dumps(doc, indent=1, sort_keys=False, ensure_ascii=True, allow_nan=False) + "\n"


def _components(n: int, pairs: Sequence[tuple[int, int]]) -> int:
    if not pairs:
        return n
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    m = coo_matrix((np.ones(len(pairs)), (a, b)), shape=(n, n))
    k, _ = connected_components(m, directed=False)
    return int(k)


def quantize_up(x: float) -> float:
    return math.ceil(x / LENGTH_QUANTUM) * LENGTH_QUANTUM


def gabriel_edges(xy: np.ndarray) -> list[tuple[int, int]]:
    """Gabriel graph via the Delaunay triangulation; always connected."""
    tri = Delaunay(xy)
    opposite: dict[tuple[int, int], list[int]] = {}
    for simplex in tri.simplices:
        a, b, c = (int(v) for v in simplex)
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            opposite.setdefault((min(u, v), max(u, v)), []).append(w)
    out = []
    for (u, v), ws in sorted(opposite.items()):
        keep = True
        for w in ws:
            # w inside the circle with diameter uv <=> angle uwv >= 90 degrees
            if np.dot(xy[u] - xy[w], xy[v] - xy[w]) <= 0:
                keep = False
                break
        if keep:
            out.append((u, v))
    return out


def generate_network(spec: NetworkSpec, max_attempts: int = 20) -> Network:
    """Scatter nodes, connect them with a proximity graph, place priced stations."""
    rng = np.random.default_rng(spec.rng_seed)
    n_backbone = spec.backbone_node_count
    n = n_backbone + spec.local_node_count
    for _ in range(max_attempts):
        xy = np.column_stack(
            (rng.uniform(0.0, spec.width_km, n), rng.uniform(0.0, spec.height_km, n))
        )
        # unique coordinates are required by the triangulation
        if len({(float(x), float(y)) for x, y in xy}) < n:
            continue
        if n == 2:
            pairs = [(0, 1)]
        else:
            try:
                pairs = gabriel_edges(xy)
            except Exception:  # degenerate (collinear) scatter
                continue
        if _components(n, pairs) != 1:
            continue
        break
    else:
        raise NetworkError(f"no connected network after {max_attempts} attempts")

    points = tuple(Point(float(x), float(y)) for x, y in xy)
    edges = []
    for u, v in pairs:
        straight = euclid_km(points[u], points[v])
        if u < n_backbone and v < n_backbone:
            wiggle = rng.uniform(0.0, 0.05)
        else:
            wiggle = rng.uniform(0.05, 0.35)
        edges.append(Edge(u, v, quantize_up(straight * (1.0 + wiggle))))

    station_nodes = np.sort(rng.choice(n, size=spec.station_count, replace=False)) if spec.station_count else []
    band_w = spec.width_km / spec.country_band_count
    stations = []
    for sid, node in enumerate(station_nodes):
        band = min(int(points[node].x // band_w), spec.country_band_count - 1)
        base = spec.band_base_prices[band]
        factor = rng.uniform(1.0 - spec.price_perturbation, 1.0 + spec.price_perturbation)
        stations.append(Station(sid, int(node), round(base * factor, 3)))

    return Network(
        points=points,
        edges=tuple(edges),
        stations=tuple(stations),
        speed=DEFAULT_SPEED_KMH,
        spec=spec,
        seed=spec.rng_seed,
    )
