"""Planned paths: assembly from stop sequences, objectives and the front document."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..fuel import FuelLeg, FuelModel, path_fuel_cost
from ..hos import StopType
from ..pareto import ObjectiveVector
from ..roadnet.routing import Trajectory

COMBINED_LABELS = ("F", "FB", "FD", "FW", "B", "D", "W")
FRONT_FORMAT_VERSION = 1


def stop_label(types) -> str:
    order = "FBDW"
    return "".join(t for t in order if StopType(t) in types)


@dataclass(frozen=True)
class StopRecord:
    station_id: int
    node_id: int
    types: str
    arrive_h: float
    depart_h: float
    fuel_before_l: float
    fuel_after_l: float
    price_eur_l: float
    node_index: int  # position of the stop in the path's node sequence

    @property
    def duration_h(self) -> float:
        return self.depart_h - self.arrive_h

    def to_dict(self) -> dict:
        return {
            "station_id": self.station_id,
            "node_id": self.node_id,
            "types": self.types,
            "arrive_h": self.arrive_h,
            "depart_h": self.depart_h,
            "fuel_before_l": self.fuel_before_l,
            "fuel_after_l": self.fuel_after_l,
            "price_eur_l": self.price_eur_l,
            "node_index": self.node_index,
        }


@dataclass
class PlannedPath:
    id: int
    stops: list[StopRecord]
    trajectories: list[Trajectory | None]  # one per arc; None for a zero-length arc
    node_ids: list[int]
    distance_km: float
    fuel_cost_eur: float
    liters: float
    travel_h: float
    stop_h: float
    total_h: float
    stop_counts: dict[str, int] = field(default_factory=dict)
    tag: str = "front"
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def objectives(self) -> ObjectiveVector:
        return ObjectiveVector(self.fuel_cost_eur, self.total_h)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "tag": self.tag,
            "fuel_cost_eur": self.fuel_cost_eur,
            "total_h": self.total_h,
            "travel_h": self.travel_h,
            "stop_h": self.stop_h,
            "distance_km": self.distance_km,
            "liters": self.liters,
            "stop_counts": {k: self.stop_counts.get(k, 0) for k in COMBINED_LABELS},
            "checks": dict(self.checks),
            "stops": [s.to_dict() for s in self.stops],
            "node_ids": list(self.node_ids),
        }


def assemble_path(
    path_id: int,
    arcs: list[Trajectory | None],
    stops: list[dict],
    fuel_model: FuelModel,
    mean_price: float,
    tag: str = "front",
) -> PlannedPath:
    """Build a path from its arcs and the stops between them.

    ``stops[i]`` follows ``arcs[i]``; each stop dict carries station_id,
    node_id, types (label), duration, price, fuel_before, fuel_after.
    """
    if len(arcs) != len(stops) + 1:
        raise ValueError("need exactly one more arc than stops")
    node_ids: list[int] = []
    clock = 0.0
    travel = 0.0
    stop_h = 0.0
    dist = 0.0
    legs: list[FuelLeg] = []
    leg_km = 0.0
    leg_price = mean_price
    records = []
    counts = {k: 0 for k in COMBINED_LABELS}
    for i, arc in enumerate(arcs):
        if arc is not None:
            if node_ids and node_ids[-1] == arc.node_ids[0]:
                node_ids.extend(arc.node_ids[1:])
            else:
                node_ids.extend(arc.node_ids)
            clock += arc.travel_time
            travel += arc.travel_time
            dist += arc.length
            leg_km += arc.length
        if i < len(stops):
            s = stops[i]
            if not node_ids:
                node_ids.append(s["node_id"])
            arrive = clock
            clock += s["duration"]
            stop_h += s["duration"]
            counts[s["types"]] += 1
            records.append(
                StopRecord(
                    station_id=s["station_id"],
                    node_id=s["node_id"],
                    types=s["types"],
                    arrive_h=arrive,
                    depart_h=clock,
                    fuel_before_l=s["fuel_before"],
                    fuel_after_l=s["fuel_after"],
                    price_eur_l=s["price"],
                    node_index=len(node_ids) - 1,
                )
            )
            if "F" in s["types"]:
                legs.append(FuelLeg(leg_km, leg_price))
                leg_km = 0.0
                leg_price = s["price"]
    legs.append(FuelLeg(leg_km, leg_price))
    return PlannedPath(
        id=path_id,
        stops=records,
        trajectories=list(arcs),
        node_ids=node_ids,
        distance_km=dist,
        fuel_cost_eur=path_fuel_cost(fuel_model, legs),
        liters=dist / fuel_model.km_per_liter,
        travel_h=travel,
        stop_h=stop_h,
        total_h=travel + stop_h,
        stop_counts=counts,
        tag=tag,
        checks=implicit_rule_checks(records),
    )


def implicit_rule_checks(stops: list[StopRecord], total_h: float | None = None) -> dict[str, bool]:
    """Post-hoc flags for the two rules not enforced during search: a daily
    rest within 24 h of the previous one ending, a weekly rest within 144 h.
    Only intervals that start at a rest inside the path are judged."""
    ok24 = ok144 = True
    last_daily_end = last_weekly_end = None
    for s in stops:
        if "D" in s.types or "W" in s.types:
            if last_daily_end is not None and s.arrive_h - last_daily_end > 24.0 + 1e-9:
                ok24 = False
            last_daily_end = s.depart_h
        if "W" in s.types:
            if last_weekly_end is not None and s.arrive_h - last_weekly_end > 144.0 + 1e-9:
                ok144 = False
            last_weekly_end = s.depart_h
    return {"daily_within_24h": ok24, "weekly_within_144h": ok144}


def front_document(
    paths: list[PlannedPath],
    *,
    origin: int,
    dest: int,
    driver0,
    vehicle0,
    params,
    mean_price: float,
    diagnostics: dict | None = None,
    tag: str = "front",
    label: str | None = None,
) -> dict:
    return {
        "format_version": FRONT_FORMAT_VERSION,
        "kind": "front",
        "tag": tag,
        "label": label,
        "origin": origin,
        "dest": dest,
        "driver0": {"cont_h": driver0.cont_h, "daily_h": driver0.daily_h, "weekly_h": driver0.weekly_h},
        "vehicle0": {"fuel_l": vehicle0.fuel_l, "tank_l": vehicle0.tank_l},
        "km_per_liter": params.fuel_model.km_per_liter,
        "mean_station_price": mean_price if math.isfinite(mean_price) else None,
        "params": params.to_dict(),
        "diagnostics": diagnostics or {},
        "paths": [p.to_dict() for p in paths],
    }
