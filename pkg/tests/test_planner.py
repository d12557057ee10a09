import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from longhaul.fuel import VehicleState
from longhaul.geo import Point
from longhaul.hos import DriverState, StopType
from longhaul.pareto import dominates
from longhaul.planner import PlannerParams, solve
from longhaul.planner.search import (
    Candidate, Outcome, SearchCase, StopSearch, find_stop_locations, prune_fuel, simulate_arc,
)
from longhaul.planner.tree import (
    ArcToDestination, ArcStatus, SearchTree, iter_arcs_depth_first, select_infeasible_arc,
)
from longhaul.roadnet import Edge, Network, NetworkSpec, Router, Station, SyntheticProvider, generate_network, make_trajectory

from builders import line_network, node_at

P = PlannerParams()
FRESH = DriverState(4.5, 9, 56)
F, B, D, W = StopType.F, StopType.B, StopType.D, StopType.W


# -- simulate_arc ------------------------------------------------------------

def _line_traj(km):
    net = line_network(km)
    return make_trajectory(net, range(net.node_count))


def test_simulate_reaches():
    out = simulate_arc(FRESH, VehicleState(500, 500), _line_traj(400), P)
    assert out.kind is Outcome.REACHES_DEST
    assert out.vehicle.fuel_l == pytest.approx(500 - 400 / 3.5)
    assert out.elapsed_h == pytest.approx(4.0)
    assert out.driver.as_tuple() == pytest.approx((0.5, 5.0, 52.0))


def test_simulate_fuel_short():
    out = simulate_arc(FRESH, VehicleState(50, 500), _line_traj(400), P)
    assert out.kind is Outcome.FUEL_SHORT and out.at_km == pytest.approx(175)
    assert out.hos_limit_km == pytest.approx(450)


def test_simulate_hos_stop():
    out = simulate_arc(DriverState(1.0, 9, 56), VehicleState(500, 500), _line_traj(400), P)
    assert out.kind is Outcome.HOS_STOP_NEEDED and out.at_km == pytest.approx(100)
    assert out.fuel_limit_km == pytest.approx(1750)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 4.5), st.floats(0, 9), st.floats(0, 56), st.floats(0, 500), st.integers(1, 120))
def test_simulate_consistent(c, d, w, fuel, steps):
    traj = _line_traj(5.0 * steps)
    out = simulate_arc(DriverState(c, d, w), VehicleState(fuel, 500), traj, P)
    first = min(out.fuel_limit_km, out.hos_limit_km)
    if out.feasible:
        assert traj.length <= first + 1e-6
        assert out.vehicle.fuel_l >= 0 and min(out.driver.as_tuple()) >= 0
    else:
        assert out.at_km == pytest.approx(first) and out.at_km < traj.length


# -- find_stop_locations -----------------------------------------------------

def example_network():
    # a dearer station 3 km off the road at km 300 and a cheaper one on it at km 320;
    # rest candidate at km 425 near the 427.5 km anchor; stations at the origin and at km 80
    return line_network(600, stations=[(0, 1.6), (80, 1.45), (320, 1.30), (425, 1.50)], spurs=[(300, 3.0, 1.40)])


def _find(net, driver, fuel):
    prov = SyntheticProvider(net)
    traj = prov.k_fastest_paths(0, node_at(600), 1)[0]
    return find_stop_locations(prov, 0, node_at(600), driver, VehicleState(fuel, 500), traj, P)


def _ids(cands):
    return sorted(c.station.id for c in cands)


def test_find_overlap_case():
    net = example_network()
    s = _find(net, FRESH, 125)
    assert s.case is SearchCase.BOTH and s.tier is B
    assert s.refuel_window == pytest.approx((262.5, 350.0))
    assert s.rest_anchor_km == pytest.approx(427.5)
    # the 300 km spur station costs a detour and is dearer: pruned
    assert _ids(s.fuel) == [2]
    assert s.rest.station.id == 3 and _ids(s.combined) == [3]


def test_find_rest_only_case():
    s = _find(example_network(), FRESH, 500)
    assert s.case is SearchCase.REST
    assert s.rest_anchor_km == pytest.approx(427.5)
    assert s.rest.station.id == 3 and not s.fuel and not s.combined


def test_find_anchor_clamped_to_start():
    s = _find(example_network(), DriverState(0.1, 9, 56), 500)
    assert s.case is SearchCase.REST and s.rest_anchor_km == 0.0
    assert s.rest.station.id == 0


def test_find_fuel_only_case():
    s = _find(example_network(), FRESH, 50)
    assert s.case is SearchCase.FUEL
    assert s.refuel_window == pytest.approx((0.0, 87.5))
    assert 1 in _ids(s.fuel) and s.rest is None


def test_prune_fuel_rule():
    def c(i, price, ins):
        return Candidate(Station(i, i, price), ins, 0.0)

    cands = [c(0, 1.5, 0.1), c(1, 1.4, 0.1), c(2, 1.4, 0.1), c(3, 1.3, 0.5), c(4, 1.6, 0.0)]
    # 0 loses to 1 (cheaper, same insertion); 2 ties 1 exactly and has the higher id
    assert _ids(prune_fuel(cands)) == [1, 3, 4]


# -- tree building blocks --------------------------------------------------

def diamond():
    """o=0 to d=1 along three routes of 100, 105 and 120 km."""
    pts = tuple(Point(0, 0) for _ in range(5))
    edges = (Edge(0, 2, 50.0), Edge(2, 1, 50.0), Edge(0, 3, 50.0), Edge(3, 1, 55.0), Edge(0, 4, 60.0), Edge(4, 1, 60.0))
    return Network(pts, edges, (Station(0, 2, 1.5),))


def test_sigma_filter():
    tree = SearchTree(SyntheticProvider(diamond()), 0, 1, FRESH, VehicleState(500, 500), P)
    arcs = tree.branch_to_destination(tree.root)
    assert [a.trajectory.travel_time for a in arcs] == pytest.approx([1.0, 1.05])


def test_branch_only_one_path():
    net = line_network(100, stations=[(50, 1.5)])
    tree = SearchTree(SyntheticProvider(net), 0, node_at(100), FRESH, VehicleState(500, 500), P)
    assert len(tree.branch_to_destination(tree.root)) == 1


def test_select_infeasible_order():
    # 30 l covers 105 km: the 100 km route is feasible and the 105 km one is not (just)
    tree = SearchTree(SyntheticProvider(diamond()), 0, 1, FRESH, VehicleState(29.5, 500), P)
    arcs = tree.branch_to_destination(tree.root)
    assert select_infeasible_arc(tree) is arcs[1]
    assert arcs[0].status is ArcStatus.FEASIBLE and arcs[1].status is ArcStatus.INFEASIBLE
    full = SearchTree(SyntheticProvider(diamond()), 0, 1, FRESH, VehicleState(500, 500), P)
    full.branch_to_destination(full.root)
    assert select_infeasible_arc(full) is None


def test_select_depth_first():
    net = line_network(600, stations=[(80, 1.45), (320, 1.30)])
    tree = SearchTree(SyntheticProvider(net), 0, node_at(600), FRESH, VehicleState(50, 500), P)
    root_arc = tree.branch_to_destination(tree.root)[0]
    children = tree.expand(root_arc)
    assert children and not any(isinstance(s, ArcToDestination) for s in tree.root.slots)
    # the first child's own arc comes before every arc of later root branches
    first = select_infeasible_arc(tree)
    assert first.origin is children[0]
    order = list(iter_arcs_depth_first(tree.root))
    assert [a.origin for a in order] == children


def test_combine_stop_types():
    tree = SearchTree(SyntheticProvider(line_network(100, stations=[(50, 1.5)])), 0, node_at(100), FRESH,
                      VehicleState(500, 500), P)
    cand = Candidate(Station(0, node_at(50), 1.5), 0.0, 0.5)
    fuel = tree.combine_stop_types(StopSearch(SearchCase.FUEL, None, fuel=[cand]))
    assert [s.types for s in fuel] == [{F}, {F, B}, {F, D}, {F, W}]
    assert [s.duration for s in fuel] == [0.25, 0.75, 11.0, 45.0]
    rest_b = tree.combine_stop_types(StopSearch(SearchCase.REST, B, rest=cand))
    assert [s.types for s in rest_b] == [{B}, {D}, {W}]
    assert [s.types for s in tree.combine_stop_types(StopSearch(SearchCase.REST, W, rest=cand))] == [{W}]
    both = tree.combine_stop_types(StopSearch(SearchCase.BOTH, D, combined=[cand]))
    assert [s.types for s in both] == [{F, D}, {F, W}]


def test_expand_child_states():
    net = line_network(600, stations=[(80, 1.45)])
    tree = SearchTree(SyntheticProvider(net), 0, node_at(600), FRESH, VehicleState(50, 500), P)
    arc = tree.branch_to_destination(tree.root)[0]
    kids = {c.stop.label: c for c in tree.expand(arc)}
    assert set(kids) == {"F", "FB", "FD", "FW"}
    f = kids["F"]
    assert f.vehicle.fuel_l == 500 and f.clock_h == pytest.approx(0.8 + 0.25)
    assert f.driver.as_tuple() == pytest.approx((3.7, 8.2, 55.2))
    assert f.fuel_before == pytest.approx(50 - 80 / 3.5)
    fd = kids["FD"]
    assert fd.driver.as_tuple() == pytest.approx((4.5, 9.0, 55.2))
    assert fd.clock_h == pytest.approx(0.8 + 11)
    assert fd.price == 1.45 and f.accrued_cost == pytest.approx(80 / 3.5 * 1.45)


def test_expand_caps_truncate():
    net = line_network(600, stations=[(80, 1.45)])
    tree = SearchTree(SyntheticProvider(net), 0, node_at(600), FRESH, VehicleState(50, 500),
                      PlannerParams(max_tree_nodes=3))
    kids = tree.expand(tree.branch_to_destination(tree.root)[0])
    assert len(kids) == 2 and tree.diag.truncated


# -- solve -----------------------------------------------------------------

def test_solve_one_hop():
    net = Network((Point(0, 0), Point(100, 0)), (Edge(0, 1, 100.0),), (Station(0, 0, 1.2), Station(1, 1, 1.6)))
    res = solve(SyntheticProvider(net), 0, 1, FRESH, VehicleState(500, 500))
    assert len(res.front) == 1
    p = res.front[0]
    assert p.stops == [] and p.fuel_cost_eur == pytest.approx(100 / 3.5 * 1.4)
    assert p.total_h == pytest.approx(1.0)


def test_solve_two_tradeoff_plans():
    # 40 l gives a refuel window of [0, 52.5] km; refuelling cheaply 4 km off the road costs 0.08 h
    net = line_network(300, stations=[(50, 1.60)], spurs=[(50, 4.0, 1.20)])
    res = solve(SyntheticProvider(net), 0, node_at(300), FRESH, VehicleState(40, 500))
    got = sorted((p.fuel_cost_eur, p.total_h) for p in res.front)
    mean = 1.4
    spur = (54 / 3.5 * mean + 254 / 3.5 * 1.2, 3.08 + 0.25)
    on_road = (50 / 3.5 * mean + 250 / 3.5 * 1.6, 3.0 + 0.25)
    assert got == [pytest.approx(spur), pytest.approx(on_road)]
    assert [p.stops[0].types for p in sorted(res.front, key=lambda p: p.fuel_cost_eur)] == ["F", "F"]


def test_solve_no_stations():
    net = line_network(100)
    res = solve(SyntheticProvider(net), 0, node_at(100), FRESH, VehicleState(500, 500))
    assert res.front == [] and "no stations" in res.diagnostics.message


def test_solve_infeasible_reports():
    net = line_network(600, stations=[(590, 1.4)])
    res = solve(SyntheticProvider(net), 0, node_at(600), FRESH, VehicleState(20, 500))
    assert res.front == [] and res.diagnostics.message == "no feasible path found"
    assert res.diagnostics.dead_ends >= 1


@pytest.fixture(scope="module")
def midsize():
    spec = NetworkSpec(width_km=900, height_km=200, backbone_node_count=150, local_node_count=650,
                       station_count=500, rng_seed=5)
    net = generate_network(spec)
    xs = [p.x for p in net.points]
    return net, xs.index(min(xs)), xs.index(max(xs))


def test_solve_deterministic_and_thread_invariant(midsize):
    net, o, d = midsize
    args = (o, d, DriverState(4.5, 9, 28), VehicleState(100, 500))
    a = solve(SyntheticProvider(net), *args, PlannerParams())
    b = solve(SyntheticProvider(net), *args, PlannerParams())
    c = solve(SyntheticProvider(net, Router(net)), *args, PlannerParams(threads=6))
    docs = [[p.to_dict() for p in r.all_paths] for r in (a, b, c)]
    assert docs[0] == docs[1] == docs[2]
    assert a.diagnostics.to_dict() == c.diagnostics.to_dict()
    assert a.front


def test_tree_invariants(midsize):
    net, o, d = midsize
    tree = SearchTree(SyntheticProvider(net), o, d, DriverState(4.5, 9, 28), VehicleState(100, 500), P)
    tree.run()
    stack = [tree.root]
    while stack:
        node = stack.pop()
        for s in node.slots:
            if isinstance(s, ArcToDestination):
                assert s.status is not ArcStatus.UNCHECKED
                continue
            assert s.clock_h > node.clock_h and s.accrued_cost >= node.accrued_cost
            assert s.depth == node.depth + 1 and s.location != node.location or node.parent is None
            stack.append(s)
    paths = [tree.path_of(leaf, i) for i, leaf in enumerate(tree.leaves)]
    front = solve(SyntheticProvider(net), o, d, DriverState(4.5, 9, 28), VehicleState(100, 500), P).front
    for p in paths:
        assert math.isclose(p.total_h, p.travel_h + p.stop_h, abs_tol=1e-9)
    for f in front:
        assert not any(dominates(q.objectives, f.objectives) for q in paths)


def test_implicit_rule_flags():
    from longhaul.planner.paths import StopRecord, implicit_rule_checks

    def rec(types, arrive, dur):
        return StopRecord(0, 0, types, arrive, arrive + dur, 0.0, 0.0, 1.0, 1)

    assert implicit_rule_checks([]) == {"daily_within_24h": True, "weekly_within_144h": True}
    ok = [rec("D", 9.0, 11.0), rec("FD", 29.0, 11.0)]
    assert implicit_rule_checks(ok)["daily_within_24h"]
    late = [rec("D", 9.0, 11.0), rec("D", 45.0, 11.0)]
    assert not implicit_rule_checks(late)["daily_within_24h"]
    # the first weekly rest ends at 55 h; a weekly rest also counts as a daily one
    weekly = [rec("W", 10.0, 45.0), rec("W", 199.0, 45.0)]
    assert implicit_rule_checks(weekly) == {"daily_within_24h": False, "weekly_within_144h": True}
    assert not implicit_rule_checks([rec("W", 10.0, 45.0), rec("W", 199.5, 45.0)])["weekly_within_144h"]
