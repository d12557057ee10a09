"""Arc simulation and the stop-location searches along a temporary path."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..fuel import VehicleState, distance_to_level
from ..geo import point_along
from ..hos import DriverState, StopType, drive, remaining_drive, required_tier
from ..roadnet.network import Station
from ..roadnet.routing import Trajectory
from .params import PlannerParams

EPS = 1e-9
REACH_EPS = 1e-6


class Outcome(str, enum.Enum):
    REACHES_DEST = "REACHES_DEST"
    FUEL_SHORT = "FUEL_SHORT"
    HOS_STOP_NEEDED = "HOS_STOP_NEEDED"


@dataclass(frozen=True)
class ArcOutcome:
    kind: Outcome
    fuel_limit_km: float  # where the tank would run dry (inf-free: may exceed length)
    hos_limit_km: float  # where the driving budget runs out
    at_km: float | None = None  # first binding limit, when not reaching
    driver: DriverState | None = None
    vehicle: VehicleState | None = None
    elapsed_h: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.kind is Outcome.REACHES_DEST


def simulate_arc(driver: DriverState, vehicle: VehicleState, traj: Trajectory, params: PlannerParams) -> ArcOutcome:
    length, hours = traj.length, traj.travel_time
    km_per_h = length / hours if hours > 0 else 0.0
    fuel_km = vehicle.range_km(params.fuel_model)
    alpha = remaining_drive(driver)
    hos_km = alpha * km_per_h if hours > 0 else math.inf
    fuel_ok = length <= fuel_km + EPS
    hos_ok = hours <= alpha + EPS
    if fuel_ok and hos_ok:
        return ArcOutcome(
            Outcome.REACHES_DEST,
            fuel_km,
            hos_km,
            driver=drive(driver, min(hours, alpha)),
            vehicle=vehicle.burn(params.fuel_model, min(length, fuel_km)),
            elapsed_h=hours,
        )
    if not fuel_ok and (hos_ok or fuel_km < hos_km):
        return ArcOutcome(Outcome.FUEL_SHORT, fuel_km, hos_km, at_km=fuel_km)
    return ArcOutcome(Outcome.HOS_STOP_NEEDED, fuel_km, hos_km, at_km=hos_km)


class SearchCase(str, enum.Enum):
    FUEL = "fuel"
    REST = "rest"
    BOTH = "both"


@dataclass(frozen=True)
class Candidate:
    station: Station
    insertion_h: float  # extra travel time versus the temporary path
    reach_h: float  # fastest time from the search origin
    detour_km: float = 0.0  # distance insertion (used by the baseline)


@dataclass
class StopSearch:
    case: SearchCase | None
    tier: StopType | None
    fuel: list[Candidate] = field(default_factory=list)
    rest: Candidate | None = None
    combined: list[Candidate] = field(default_factory=list)
    refuel_window: tuple[float, float] | None = None
    rest_anchor_km: float | None = None

    @property
    def empty(self) -> bool:
        return not (self.fuel or self.rest or self.combined)


@dataclass(frozen=True)
class Geometry:
    """Breakpoints of a temporary path, in km from its start."""

    length: float
    fuel_km: float
    hos_km: float
    alpha_h: float
    anchor_km: float
    window: tuple[float, float]

    @property
    def fuel_binds(self) -> bool:
        return self.fuel_km < self.length - EPS

    @property
    def hos_binds(self) -> bool:
        return self.hos_km < self.length - EPS


def path_geometry(
    driver: DriverState, vehicle: VehicleState, traj: Trajectory, params: PlannerParams, upper: float, lower: float
) -> Geometry:
    fm = params.fuel_model
    length = traj.length
    km_per_h = length / traj.travel_time if traj.travel_time > 0 else 0.0
    fuel_km = vehicle.range_km(fm)
    alpha = remaining_drive(driver)
    hos_km = alpha * km_per_h
    # the search starts once max(delta * alpha, floor) of driving budget is left
    anchor_h = alpha - max(params.delta * alpha, params.min_rest_window_h)
    anchor_km = min(max(0.0, anchor_h * km_per_h), length)
    hi, lo = upper * vehicle.tank_l, lower * vehicle.tank_l
    if vehicle.fuel_l <= lo:
        start, end = 0.0, fuel_km
    else:
        start = distance_to_level(fm, vehicle, min(hi, vehicle.fuel_l))
        end = distance_to_level(fm, vehicle, lo)
    start, end = min(start, length), min(end, length)
    return Geometry(length, fuel_km, hos_km, alpha, anchor_km, (start, end))


def sweep_positions(start: float, end: float, step: float) -> list[float]:
    """start, start+step, ... and finally end itself."""
    if start > end + EPS:
        return []
    out = []
    s = start
    i = 0
    while s < end - EPS:
        out.append(s)
        i += 1
        s = start + i * step
    out.append(end)
    return out


def backward_positions(anchor: float, step: float) -> list[float]:
    out = []
    i = 0
    s = anchor
    while s > EPS:
        out.append(s)
        i += 1
        s = anchor - i * step
    out.append(0.0)
    return out


class CandidateScorer:
    """Reachability and insertion cost of candidate stations for one temporary path."""

    def __init__(self, provider, origin: int, dest: int, driver, vehicle, traj, params, exclude=()):
        self.provider = provider
        self.origin = origin
        self.dest = dest
        self.alpha = remaining_drive(driver)
        self.range_km = vehicle.range_km(params.fuel_model)
        self.base_h = traj.travel_time
        self.exclude = set(exclude)
        self._cache: dict[int, Candidate | None] = {}

    def score(self, st: Station) -> Candidate | None:
        if st.id in self._cache:
            return self._cache[st.id]
        out = None
        if st.node_id not in self.exclude and st.node_id != self.dest:
            reach = self.provider.fastest_time(self.origin, st.node_id)
            onward = self.provider.fastest_time(st.node_id, self.dest)
            if reach is not None and onward is not None:
                reach_km = reach * self.provider.speed
                if reach <= self.alpha + REACH_EPS and reach_km <= self.range_km + REACH_EPS:
                    direct = self.provider.fastest_time(self.origin, self.dest)
                    detour_km = (reach + onward - (direct if direct is not None else 0.0)) * self.provider.speed
                    out = Candidate(st, reach + onward - self.base_h, reach, detour_km)
        self._cache[st.id] = out
        return out

    def scan(self, traj: Trajectory, positions, radius: float) -> list[Candidate]:
        seen: dict[int, Candidate] = {}
        for s in positions:
            for st in self.provider.radius_stations(point_along(traj.polyline, s), radius):
                if st.id not in seen:
                    c = self.score(st)
                    if c is not None:
                        seen[st.id] = c
        return [seen[i] for i in sorted(seen)]

    def backward(self, traj: Trajectory, anchor_km: float, step: float, radius: float) -> list[Candidate]:
        """Radius searches stepping back from the anchor until one hit is reachable."""
        for s in backward_positions(anchor_km, step):
            found = []
            for st in self.provider.radius_stations(point_along(traj.polyline, s), radius):
                c = self.score(st)
                if c is not None:
                    found.append(c)
            if found:
                return sorted(found, key=lambda c: c.station.id)
        return []


def prune_fuel(cands: list[Candidate]) -> list[Candidate]:
    """Drop a station when another has price <= and insertion < (or price <
    and insertion <=); exact ties on both keep the lower station id."""
    keep = []
    for c in cands:
        p, t = c.station.price, c.insertion_h
        dominated = False
        for o in cands:
            if o is c:
                continue
            op, ot = o.station.price, o.insertion_h
            if (op <= p and ot < t) or (op < p and ot <= t) or (op == p and ot == t and o.station.id < c.station.id):
                dominated = True
                break
        if not dominated:
            keep.append(c)
    return keep


def cheapest_insertion(cands: list[Candidate]) -> Candidate | None:
    if not cands:
        return None
    return min(cands, key=lambda c: (c.insertion_h, c.station.id))


def find_stop_locations(
    provider, origin: int, dest: int, driver: DriverState, vehicle: VehicleState, traj: Trajectory,
    params: PlannerParams, exclude=(),
) -> StopSearch:
    geo = path_geometry(driver, vehicle, traj, params, params.beta, params.gamma)
    scorer = CandidateScorer(provider, origin, dest, driver, vehicle, traj, params, exclude)
    tier = required_tier(driver) if geo.hos_binds else None
    if geo.fuel_binds and (not geo.hos_binds or geo.fuel_km < geo.anchor_km):
        case = SearchCase.FUEL
    elif geo.hos_binds and (not geo.fuel_binds or geo.hos_km <= geo.window[0]):
        case = SearchCase.REST
    elif geo.fuel_binds and geo.hos_binds:
        case = SearchCase.BOTH
    else:
        return StopSearch(None, None)

    out = StopSearch(case, tier, refuel_window=geo.window, rest_anchor_km=geo.anchor_km)
    if case is SearchCase.FUEL:
        start, end = geo.window
        out.fuel = prune_fuel(scorer.scan(traj, sweep_positions(start, end, params.interval_km), params.radius_km))
        return out
    at_anchor = scorer.backward(traj, geo.anchor_km, params.interval_km, params.radius_km)
    out.rest = cheapest_insertion(at_anchor)
    if case is SearchCase.BOTH:
        start, end = geo.window[0], min(geo.window[1], geo.anchor_km)
        out.fuel = prune_fuel(scorer.scan(traj, sweep_positions(start, end, params.interval_km), params.radius_km))
        out.combined = prune_fuel(at_anchor)
    return out


def fuel_variants() -> list[frozenset[StopType]]:
    F, B, D, W = StopType.F, StopType.B, StopType.D, StopType.W
    return [frozenset({F}), frozenset({F, B}), frozenset({F, D}), frozenset({F, W})]


def rest_variants(tier: StopType) -> list[frozenset[StopType]]:
    tiers = [StopType.B, StopType.D, StopType.W]
    return [frozenset({t}) for t in tiers[tiers.index(tier):]]


def combined_variants(tier: StopType) -> list[frozenset[StopType]]:
    return [frozenset({StopType.F}) | t for t in rest_variants(tier)]
