"""The myopic current-practice driver used as the comparison yardstick.

The driver follows the fastest path, refuels only when the tank gets down to
the last few percent (at the station that adds the least distance, whatever
its price), rests with the minimal required tier where the planner's rest
search would put the stop, and re-plans the fastest path after every stop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fuel import VehicleState
from .hos import DriverState, StopType, apply_rest, remaining_drive, required_tier
from .planner.params import PlannerParams
from .planner.paths import PlannedPath, assemble_path, stop_label
from .planner.search import CandidateScorer, cheapest_insertion, path_geometry, simulate_arc, sweep_positions
from .roadnet.provider import CachedProvider

MAX_CP_STOPS = 64


@dataclass
class CpResult:
    path: PlannedPath | None
    message: str = ""
    provider_calls: int = 0
    mean_price: float = 0.0
    stops: list[dict] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.path is not None


def _closest_detour(cands):
    if not cands:
        return None
    return min(cands, key=lambda c: (c.detour_km, c.station.id))


def solve_cp(provider, origin: int, dest: int, driver0: DriverState, vehicle0: VehicleState,
             params: PlannerParams | None = None) -> CpResult:
    params = params or PlannerParams()
    if origin == dest:
        raise ValueError("origin equals destination")
    prov = provider if isinstance(provider, CachedProvider) else CachedProvider(provider)
    fm, rules = params.fuel_model, params.rules
    here, driver, vehicle = origin, driver0, vehicle0
    arcs, stops = [], []

    def fail(msg):
        return CpResult(None, msg, prov.distinct_queries, prov.mean_station_price, stops)

    if not math.isfinite(prov.mean_station_price):
        return fail("network has no stations: the initial fuel has no price")

    while True:
        trajs = prov.k_fastest_paths(here, dest, 1)
        if not trajs:
            return fail("destination unreachable")
        traj = trajs[0]
        outcome = simulate_arc(driver, vehicle, traj, params)
        if outcome.feasible:
            arcs.append(traj)
            break
        if len(stops) >= MAX_CP_STOPS:
            return fail("too many stops")

        geo = path_geometry(driver, vehicle, traj, params, params.cp_upper, params.cp_lower)
        # unlike the planner, the driver may stay put: a break can become the rest that follows it
        scorer = CandidateScorer(prov, here, dest, driver, vehicle, traj, params)
        refuel_first = geo.fuel_binds and (not geo.hos_binds or geo.window[0] < geo.anchor_km)
        if refuel_first:
            start, end = geo.window
            pick = _closest_detour(scorer.scan(traj, sweep_positions(start, end, params.interval_km), params.radius_km))
            if pick is None:
                return fail(f"stranded: no station in the refuel window [{start:.1f}, {end:.1f}] km")
        else:
            pick = cheapest_insertion(scorer.backward(traj, geo.anchor_km, params.interval_km, params.radius_km))
            if pick is None:
                return fail("no rest location found")

        st = pick.station
        if st.node_id == here:
            arc, d_arr, v_arr = None, driver, vehicle
        else:
            arc = prov.k_fastest_paths(here, st.node_id, 1)[0]
            sub = simulate_arc(driver, vehicle, arc, params)
            if not sub.feasible:
                return fail("stop not reachable")
            d_arr, v_arr = sub.driver, sub.vehicle

        if refuel_first:
            types = {StopType.F}
            # a rest due within half an hour of driving is taken together with the fuel stop
            if remaining_drive(d_arr) <= params.cp_combine_h + 1e-9:
                types.add(required_tier(d_arr))
        else:
            types = {required_tier(d_arr)}
        rest = [t for t in types if t is not StopType.F]
        if rest:
            driver, duration = apply_rest(d_arr, rest[0], rules)
        else:
            driver, duration = d_arr, rules.fuel_stop_h
        fuel_before = v_arr.fuel_l
        vehicle = v_arr.filled() if StopType.F in types else v_arr
        arcs.append(arc)
        stops.append({
            "station_id": st.id,
            "node_id": st.node_id,
            "types": stop_label(frozenset(types)),
            "duration": duration,
            "price": st.price,
            "fuel_before": fuel_before,
            "fuel_after": vehicle.fuel_l,
        })
        here = st.node_id

    path = assemble_path(0, arcs, stops, fm, prov.mean_station_price, tag="CP")
    return CpResult(path, "", prov.distinct_queries, prov.mean_station_price, stops)
