"""The GIS abstraction consumed by the planner.

Three query kinds: ``k_fastest_paths``, ``fastest_time`` and
``radius_stations``.  :class:`SyntheticProvider` answers them from a generated
network; :class:`RecordingProvider` logs every answered query to a replay
file; :class:`ReplayProvider` serves such a file offline and fails hard on any
query it has not seen.  All providers count their calls per kind.
"""
from __future__ import annotations

import json
import math
import threading
from collections import Counter
from concurrent.futures import Future
from typing import Protocol

from ..geo import Point
from .network import FORMAT_VERSION, Network, Station, dumps_document
from .routing import Router, Trajectory

QUERY_KINDS = ("k_fastest_paths", "fastest_time", "radius_stations")


class ReplayMiss(LookupError):
    pass


class Provider(Protocol):
    speed: float
    mean_station_price: float
    calls: Counter

    def k_fastest_paths(self, o: int, d: int, k: int) -> list[Trajectory]: ...

    def fastest_time(self, o: int, d: int) -> float | None: ...

    def radius_stations(self, center: Point, radius: float) -> list[Station]: ...


class _Counting:
    def __init__(self):
        self.calls: Counter = Counter()
        self._lock = threading.Lock()

    def _count(self, kind: str) -> None:
        with self._lock:
            self.calls[kind] += 1

    @property
    def total_calls(self) -> int:
        return sum(self.calls.values())


class SyntheticProvider(_Counting):
    def __init__(self, net: Network, router: Router | None = None):
        super().__init__()
        self.net = net
        self.router = router or Router(net)
        self.speed = net.speed
        self.mean_station_price = net.mean_station_price if net.stations else float("nan")

    def k_fastest_paths(self, o, d, k):
        self._count("k_fastest_paths")
        return self.router.k_fastest_paths(o, d, k)

    def fastest_time(self, o, d):
        self._count("fastest_time")
        return self.router.fastest_time(o, d)

    def radius_stations(self, center, radius):
        self._count("radius_stations")
        return self.router.radius_stations(center, radius)


# -- wire format ------------------------------------------------------------

def _args(kind: str, *a) -> dict:
    if kind == "radius_stations":
        center, radius = a
        return {"x": float(center.x), "y": float(center.y), "radius": float(radius)}
    if kind == "k_fastest_paths":
        o, d, k = a
        return {"o": int(o), "d": int(d), "k": int(k)}
    o, d = a
    return {"o": int(o), "d": int(d)}


def _encode(kind: str, response):
    if kind == "k_fastest_paths":
        return [t.to_dict() for t in response]
    if kind == "radius_stations":
        return [{"id": s.id, "node": s.node_id, "price": s.price} for s in response]
    return response


def _decode(kind: str, payload):
    if kind == "k_fastest_paths":
        return [Trajectory.from_dict(t) for t in payload]
    if kind == "radius_stations":
        return [Station(int(s["id"]), int(s["node"]), float(s["price"])) for s in payload]
    return None if payload is None else float(payload)


def _key(kind: str, args: dict) -> str:
    return kind + json.dumps(args, sort_keys=True)


class RecordingProvider(_Counting):
    """Wraps a provider and records each distinct query with its answer."""

    def __init__(self, inner):
        super().__init__()
        self.inner = inner
        self.speed = inner.speed
        self.mean_station_price = inner.mean_station_price
        self.records: list[dict] = []
        self._index: set[str] = set()
        self._rec_lock = threading.Lock()

    def _record(self, kind, args, response):
        key = _key(kind, args)
        with self._rec_lock:
            if key not in self._index:
                self._index.add(key)
                self.records.append({"query": kind, "args": args, "response": _encode(kind, response)})

    def k_fastest_paths(self, o, d, k):
        self._count("k_fastest_paths")
        out = self.inner.k_fastest_paths(o, d, k)
        self._record("k_fastest_paths", _args("k_fastest_paths", o, d, k), out)
        return out

    def fastest_time(self, o, d):
        self._count("fastest_time")
        out = self.inner.fastest_time(o, d)
        self._record("fastest_time", _args("fastest_time", o, d), out)
        return out

    def radius_stations(self, center, radius):
        self._count("radius_stations")
        out = self.inner.radius_stations(center, radius)
        self._record("radius_stations", _args("radius_stations", center, radius), out)
        return out

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "replay",
            "speed_kmh": self.speed,
            "mean_station_price": self.mean_station_price if math.isfinite(self.mean_station_price) else None,
            "records": self.records,
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps_document(self.to_dict()))


class ReplayProvider(_Counting):
    def __init__(self, doc: dict):
        super().__init__()
        if doc.get("kind") != "replay" or doc.get("format_version") != FORMAT_VERSION:
            raise ValueError("not a replay document of a supported version")
        self.speed = float(doc["speed_kmh"])
        mean = doc["mean_station_price"]
        self.mean_station_price = float("nan") if mean is None else float(mean)
        self.records = doc["records"]
        self._table = {}
        for rec in self.records:
            if rec["query"] not in QUERY_KINDS:
                raise ValueError(f"unknown query kind {rec['query']!r}")
            self._table[_key(rec["query"], rec["args"])] = rec["response"]

    @classmethod
    def load(cls, path) -> "ReplayProvider":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def _lookup(self, kind, args):
        self._count(kind)
        key = _key(kind, args)
        try:
            payload = self._table[key]
        except KeyError:
            raise ReplayMiss(f"no recorded answer for {kind} {args}") from None
        return _decode(kind, payload)

    def k_fastest_paths(self, o, d, k):
        return self._lookup("k_fastest_paths", _args("k_fastest_paths", o, d, k))

    def fastest_time(self, o, d):
        return self._lookup("fastest_time", _args("fastest_time", o, d))

    def radius_stations(self, center, radius):
        return self._lookup("radius_stations", _args("radius_stations", center, radius))


class CachedProvider:
    """Per-solve memo in front of a provider: each distinct query reaches the
    provider exactly once, even under concurrent callers."""

    def __init__(self, inner):
        self.inner = inner
        self.speed = inner.speed
        self.mean_station_price = inner.mean_station_price
        self._memo: dict[str, Future] = {}
        self._lock = threading.Lock()

    def _get(self, kind, args, call):
        key = _key(kind, args)
        with self._lock:
            fut = self._memo.get(key)
            owner = fut is None
            if owner:
                fut = Future()
                self._memo[key] = fut
        if owner:
            try:
                fut.set_result(call())
            except BaseException as exc:
                fut.set_exception(exc)
        return fut.result()

    @property
    def distinct_queries(self) -> int:
        return len(self._memo)

    def k_fastest_paths(self, o, d, k):
        return self._get("k_fastest_paths", _args("k_fastest_paths", o, d, k), lambda: self.inner.k_fastest_paths(o, d, k))

    def fastest_time(self, o, d):
        return self._get("fastest_time", _args("fastest_time", o, d), lambda: self.inner.fastest_time(o, d))

    def radius_stations(self, center, radius):
        return self._get(
            "radius_stations", _args("radius_stations", center, radius), lambda: self.inner.radius_stations(center, radius)
        )
