"""Independent re-simulation of emitted path documents.

Walks every path edge by edge on the network, with its own clock, fuel and
driving-time bookkeeping, and reports each place where the document and the
replay disagree.  Deliberately shares no code with the planner.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .hos import EU_RULES, HosRules
from .roadnet.network import Network

TOL = 1e-6


@dataclass
class PathAudit:
    path_id: int
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass
class AuditReport:
    paths: list[PathAudit]
    problems: list[str] = field(default_factory=list)  # document-level

    @property
    def ok(self) -> bool:
        return not self.problems and all(p.ok for p in self.paths)

    def lines(self) -> list[str]:
        out = list(self.problems)
        for p in self.paths:
            out.extend(f"path {p.path_id}: {msg}" for msg in p.problems)
        return out


def _close(a: float, b: float, tol: float = TOL) -> bool:
    return abs(a - b) <= tol


def audit_path(net: Network, doc: dict, path: dict, rules: HosRules = EU_RULES) -> PathAudit:
    rep = PathAudit(path.get("id", -1))
    bad = rep.problems.append
    kmpl = float(doc["km_per_liter"])
    tank = float(doc["vehicle0"]["tank_l"])
    fuel = float(doc["vehicle0"]["fuel_l"])
    d0 = doc["driver0"]
    # driving done since the last reset of each kind, seeded from the initial budgets
    cont = rules.cont_max - float(d0["cont_h"])
    daily = rules.daily_max - float(d0["daily_h"])
    weekly = rules.weekly_max - float(d0["weekly_h"])
    speed = net.speed
    if not net.stations:
        bad("network has no stations, so no path can be priced")
        return rep
    mean_price = net.mean_station_price
    if doc["mean_station_price"] is None or not _close(mean_price, float(doc["mean_station_price"])):
        bad(f"mean station price {doc['mean_station_price']} differs from network {mean_price}")
    stations = net.station_by_id
    lengths = net.edge_length

    nodes = path["node_ids"]
    if not nodes or nodes[0] != doc["origin"] or nodes[-1] != doc["dest"]:
        bad("node sequence does not run from origin to destination")
        return rep
    stops_at: dict[int, list[dict]] = {}
    for s in path["stops"]:
        stops_at.setdefault(int(s["node_index"]), []).append(s)

    clock = travel = stop_h = dist = cost = 0.0
    price = mean_price
    min_fuel = fuel
    worst = {"continuous": 0.0, "daily": 0.0, "weekly": 0.0}
    counted = 0

    def at_node(i):
        nonlocal clock, stop_h, fuel, price, cont, daily, weekly, counted
        for s in stops_at.get(i, []):
            counted += 1
            sid = int(s["station_id"])
            st = stations.get(sid)
            if st is None or st.node_id != nodes[i] or st.node_id != s["node_id"]:
                bad(f"stop at station {sid} is not at path node {nodes[i]}")
                continue
            types = s["types"]
            rest = [t for t in "BDW" if t in types]
            if len(rest) > 1 or not types or any(t not in "FBDW" for t in types):
                bad(f"invalid stop type {types!r}")
                continue
            duration = {"B": rules.break_h, "D": rules.daily_rest_h, "W": rules.weekly_rest_h}[rest[0]] if rest else rules.fuel_stop_h
            if not _close(s["arrive_h"], clock):
                bad(f"stop {sid} arrival {s['arrive_h']} but replay clock {clock}")
            if not _close(s["depart_h"] - s["arrive_h"], duration):
                bad(f"stop {sid} lasts {s['depart_h'] - s['arrive_h']} h, rules say {duration} h")
            if not _close(s["fuel_before_l"], fuel):
                bad(f"stop {sid} fuel before {s['fuel_before_l']} but replay has {fuel}")
            clock += duration
            stop_h += duration
            if "F" in types:
                if not _close(s["price_eur_l"], st.price):
                    bad(f"stop {sid} price {s['price_eur_l']} but station sells at {st.price}")
                fuel = tank
                price = st.price
            if not _close(s["fuel_after_l"], fuel):
                bad(f"stop {sid} fuel after {s['fuel_after_l']} but replay has {fuel}")
            if rest:
                cont = 0.0
                if rest[0] in "DW":
                    daily = 0.0
                if rest[0] == "W":
                    weekly = 0.0

    for i in range(len(nodes)):
        if i > 0:
            a, b = nodes[i - 1], nodes[i]
            length = lengths.get((min(a, b), max(a, b)))
            if length is None:
                bad(f"nodes {a} and {b} are not adjacent")
                return rep
            h = length / speed
            fuel -= length / kmpl
            min_fuel = min(min_fuel, fuel)
            cost += length / kmpl * price
            dist += length
            travel += h
            clock += h
            cont += h
            daily += h
            weekly += h
            worst["continuous"] = max(worst["continuous"], cont)
            worst["daily"] = max(worst["daily"], daily)
            worst["weekly"] = max(worst["weekly"], weekly)
        at_node(i)

    if counted != len(path["stops"]):
        bad("stop node indices do not match the node sequence")
    if min_fuel < -TOL:
        bad(f"tank runs dry (minimum {min_fuel:.6f} l)")
    for rule, cap in (("continuous", rules.cont_max), ("daily", rules.daily_max), ("weekly", rules.weekly_max)):
        if worst[rule] > cap + TOL:
            bad(f"{rule} driving reaches {worst[rule]:.6f} h, limit {cap} h")
    checks = [
        ("fuel_cost_eur", cost),
        ("travel_h", travel),
        ("stop_h", stop_h),
        ("total_h", clock),
        ("distance_km", dist),
    ]
    for key, val in checks:
        if not _close(float(path[key]), val):
            bad(f"{key} {path[key]} but replay gives {val}")
    if not math.isclose(path["total_h"], path["travel_h"] + path["stop_h"], rel_tol=0, abs_tol=TOL):
        bad("total_h differs from travel_h + stop_h")
    return rep


def audit_document(net: Network, doc: dict, rules: HosRules = EU_RULES) -> AuditReport:
    report = AuditReport([])
    if doc.get("kind") != "front":
        report.problems.append("not a front document")
        return report
    for key in ("origin", "dest"):
        if not (0 <= int(doc[key]) < net.node_count):
            report.problems.append(f"{key} {doc[key]} is not a network node")
    if report.problems:
        return report
    for p in doc["paths"]:
        report.paths.append(audit_path(net, doc, p, rules))
    return report
