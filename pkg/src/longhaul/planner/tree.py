"""Tree-expansion heuristic: repair infeasible temporary paths by inserting
stops, depth first, then keep the non-dominated complete paths."""
from __future__ import annotations

import enum
import itertools
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..fuel import VehicleState, leg_cost
from ..hos import DriverState, StopType, apply_rest
from ..pareto import pareto_filter
from ..roadnet.network import Station
from ..roadnet.provider import CachedProvider
from ..roadnet.routing import Trajectory
from .params import PlannerParams
from .paths import PlannedPath, assemble_path, stop_label
from .search import (
    ArcOutcome,
    StopSearch,
    combined_variants,
    find_stop_locations,
    fuel_variants,
    rest_variants,
    simulate_arc,
)

log = logging.getLogger(__name__)


class ArcStatus(str, enum.Enum):
    UNCHECKED = "unchecked"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Stop:
    station_id: int
    node_id: int
    types: frozenset
    duration: float
    price: float

    @property
    def label(self) -> str:
        return stop_label(self.types)


@dataclass(eq=False)
class TreeNode:
    id: int
    location: int
    driver: DriverState
    vehicle: VehicleState
    clock_h: float  # departure time
    accrued_cost: float
    price: float  # price charged for the km driven after this node
    depth: int = 0
    stop: Stop | None = None
    parent: "TreeNode | None" = None
    arc_in: Trajectory | None = None
    arrive_h: float = 0.0
    fuel_before: float = 0.0
    slots: list = field(default_factory=list)  # ArcToDestination | TreeNode, creation order
    dead: bool = False

    def child_keys(self) -> set:
        return {(s.stop.station_id, s.stop.types) for s in self.slots if isinstance(s, TreeNode)}


@dataclass(eq=False)
class ArcToDestination:
    id: int
    origin: TreeNode
    trajectory: Trajectory
    status: ArcStatus = ArcStatus.UNCHECKED
    outcome: ArcOutcome | None = None

    @property
    def reason(self) -> str | None:
        return None if self.outcome is None or self.outcome.feasible else self.outcome.kind.value

    @property
    def position_km(self) -> float | None:
        return None if self.outcome is None else self.outcome.at_km


@dataclass
class Diagnostics:
    total_feasible_paths: int = 0
    provider_calls: int = 0
    nodes_expanded: int = 0
    tree_nodes: int = 0
    evaluated_fuel_stops: int = 0
    evaluated_rest_stops: int = 0
    dead_ends: int = 0
    discarded_stops: int = 0
    truncated: bool = False
    message: str = ""

    def to_dict(self) -> dict:
        return dict(vars(self))


@dataclass
class SolveResult:
    front: list[PlannedPath]
    diagnostics: Diagnostics
    all_paths: list[PlannedPath] = field(default_factory=list)
    mean_price: float = 0.0


class SearchTree:
    def __init__(self, provider, origin: int, dest: int, driver0: DriverState, vehicle0: VehicleState,
                 params: PlannerParams):
        if origin == dest:
            raise ValueError("origin equals destination")
        self.provider = provider if isinstance(provider, CachedProvider) else CachedProvider(provider)
        self.dest = dest
        self.params = params
        self.mean_price = self.provider.mean_station_price
        self._ids = itertools.count()
        self._arc_ids = itertools.count()
        self.diag = Diagnostics()
        self.root = TreeNode(
            id=next(self._ids), location=origin, driver=driver0, vehicle=vehicle0, clock_h=0.0,
            accrued_cost=0.0, price=self.mean_price, fuel_before=vehicle0.fuel_l,
        )
        self.node_count = 1
        self.leaves: list[ArcToDestination] = []

    # -- building blocks ---------------------------------------------------

    def branch_to_destination(self, node: TreeNode) -> list[ArcToDestination]:
        trajs = self.provider.k_fastest_paths(node.location, self.dest, self.params.k)
        if not trajs:
            node.dead = True
            return []
        best = trajs[0].travel_time
        kept = [t for i, t in enumerate(trajs) if i == 0 or t.travel_time < self.params.sigma * best]
        arcs = [ArcToDestination(next(self._arc_ids), node, t) for t in kept]
        node.slots.extend(arcs)
        return arcs

    def check(self, arc: ArcToDestination) -> bool:
        if arc.outcome is None:
            arc.outcome = simulate_arc(arc.origin.driver, arc.origin.vehicle, arc.trajectory, self.params)
            arc.status = ArcStatus.FEASIBLE if arc.outcome.feasible else ArcStatus.INFEASIBLE
        return arc.outcome.feasible

    def find_stop_locations(self, arc: ArcToDestination) -> StopSearch:
        node = arc.origin
        exclude = () if node.parent is None else (node.location,)
        return find_stop_locations(
            self.provider, node.location, self.dest, node.driver, node.vehicle, arc.trajectory, self.params, exclude
        )

    def combine_stop_types(self, search: StopSearch) -> list[Stop]:
        rules = self.params.rules
        out: list[Stop] = []

        def make(st: Station, types) -> Stop:
            rest = [t for t in types if t is not StopType.F]
            duration = rules.rest_duration(rest[0]) if rest else rules.fuel_stop_h
            return Stop(st.id, st.node_id, types, duration, st.price)

        for c in search.fuel:
            out.extend(make(c.station, t) for t in fuel_variants())
        if search.rest is not None:
            out.extend(make(search.rest.station, t) for t in rest_variants(search.tier))
        for c in search.combined:
            out.extend(make(c.station, t) for t in combined_variants(search.tier))
        return out

    def _connect(self, node: TreeNode, stop: Stop):
        if stop.node_id == node.location:
            return None, None
        trajs = self.provider.k_fastest_paths(node.location, stop.node_id, 1)
        if not trajs:
            return None, False
        traj = trajs[0]
        return traj, simulate_arc(node.driver, node.vehicle, traj, self.params)

    def make_child(self, node: TreeNode, stop: Stop, traj: Trajectory | None, outcome: ArcOutcome | None) -> TreeNode:
        if traj is None:
            driver, vehicle, travel, length = node.driver, node.vehicle, 0.0, 0.0
        else:
            driver, vehicle, travel, length = outcome.driver, outcome.vehicle, traj.travel_time, traj.length
        fuel_before = vehicle.fuel_l
        price = node.price
        if StopType.F in stop.types:
            vehicle = vehicle.filled()
            price = stop.price
        rest = [t for t in stop.types if t is not StopType.F]
        if rest:
            driver, _ = apply_rest(driver, rest[0], self.params.rules)
        arrive = node.clock_h + travel
        cost = node.accrued_cost + (leg_cost(self.params.fuel_model, length, node.price) if length else 0.0)
        child = TreeNode(
            id=next(self._ids), location=stop.node_id, driver=driver, vehicle=vehicle,
            clock_h=arrive + stop.duration, accrued_cost=cost, price=price, depth=node.depth + 1,
            stop=stop, parent=node, arc_in=traj, arrive_h=arrive, fuel_before=fuel_before,
        )
        self.node_count += 1
        return child

    def expand(self, arc: ArcToDestination, pool: ThreadPoolExecutor | None = None) -> list[TreeNode]:
        """Replace an infeasible arc to the destination by stop nodes."""
        node = arc.origin
        self.diag.nodes_expanded += 1
        search = self.find_stop_locations(arc)
        self.diag.evaluated_fuel_stops += len(search.fuel) + len(search.combined)
        self.diag.evaluated_rest_stops += (search.rest is not None) + len(search.combined)
        existing = node.child_keys()
        stops = [s for s in self.combine_stop_types(search) if (s.station_id, s.types) not in existing]
        # de-duplicate stations seen through several temporary paths of the same node
        uniq, seen = [], set()
        for s in stops:
            if (s.station_id, s.types) not in seen:
                seen.add((s.station_id, s.types))
                uniq.append(s)
        stops = uniq

        children: list[TreeNode] = []
        if node.depth + 1 > self.params.max_depth:
            if stops:
                self.diag.truncated = True
            stops = []
        room = self.params.max_tree_nodes - self.node_count
        if len(stops) > room:
            self.diag.truncated = True
            stops = stops[: max(room, 0)]

        def prepare(stop):
            traj, outcome = self._connect(node, stop)
            if traj is not None and outcome is not None and outcome.feasible:
                # warm the destination query; identical answers either way
                self.provider.k_fastest_paths(stop.node_id, self.dest, self.params.k)
            return traj, outcome

        prepared = list(pool.map(prepare, stops)) if pool is not None and len(stops) > 1 else [prepare(s) for s in stops]
        for stop, (traj, outcome) in zip(stops, prepared):
            if traj is None and outcome is False:
                self.diag.discarded_stops += 1
                continue
            if traj is not None and not outcome.feasible:
                self.diag.discarded_stops += 1
                continue
            child = self.make_child(node, stop, traj, outcome)
            self.branch_to_destination(child)
            children.append(child)

        i = node.slots.index(arc)
        node.slots[i : i + 1] = children
        if search.empty:
            self.diag.dead_ends += 1
        return children

    # -- driver ------------------------------------------------------------

    def run(self) -> None:
        self.branch_to_destination(self.root)
        pool = ThreadPoolExecutor(self.params.threads) if self.params.threads > 1 else None
        try:
            stack: list = list(reversed(self.root.slots))
            while stack:
                item = stack.pop()
                if isinstance(item, TreeNode):
                    stack.extend(reversed(item.slots))
                    continue
                if self.check(item):
                    self.leaves.append(item)
                    continue
                children = self.expand(item, pool)
                stack.extend(reversed(children))
        finally:
            if pool is not None:
                pool.shutdown()
        self.diag.tree_nodes = self.node_count
        self.diag.provider_calls = self.provider.distinct_queries
        self.diag.total_feasible_paths = len(self.leaves)

    def path_of(self, leaf: ArcToDestination, path_id: int) -> PlannedPath:
        chain = []
        node = leaf.origin
        while node.parent is not None:
            chain.append(node)
            node = node.parent
        chain.reverse()
        arcs = [n.arc_in for n in chain] + [leaf.trajectory]
        stops = [
            {
                "station_id": n.stop.station_id,
                "node_id": n.stop.node_id,
                "types": n.stop.label,
                "duration": n.stop.duration,
                "price": n.stop.price,
                "fuel_before": n.fuel_before,
                "fuel_after": n.vehicle.fuel_l,
            }
            for n in chain
        ]
        return assemble_path(path_id, arcs, stops, self.params.fuel_model, self.mean_price)


def iter_arcs_depth_first(node: TreeNode):
    for item in node.slots:
        if isinstance(item, TreeNode):
            yield from iter_arcs_depth_first(item)
        else:
            yield item


def select_infeasible_arc(tree: SearchTree) -> ArcToDestination | None:
    """First arc to the destination, in depth-first creation order, that does
    not reach it."""
    for arc in iter_arcs_depth_first(tree.root):
        if not tree.check(arc):
            return arc
    return None


def solve(provider, origin: int, dest: int, driver0: DriverState, vehicle0: VehicleState,
          params: PlannerParams | None = None) -> SolveResult:
    params = params or PlannerParams()
    tree = SearchTree(provider, origin, dest, driver0, vehicle0, params)
    if not math.isfinite(tree.mean_price):
        tree.diag.message = "network has no stations: the initial fuel has no price"
        return SolveResult([], tree.diag, [], tree.mean_price)
    tree.run()
    paths = [tree.path_of(leaf, i) for i, leaf in enumerate(tree.leaves)]
    front = [p for _, p in pareto_filter([(p.objectives, p) for p in paths])]
    if not front:
        tree.diag.message = "no feasible path found"
    if tree.diag.truncated:
        log.warning("search truncated at %d tree nodes", tree.node_count)
    return SolveResult(front, tree.diag, paths, tree.mean_price)
