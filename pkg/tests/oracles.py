"""Independent reference implementations used only by the tests.

Nothing here imports the planner's search code: shortest paths come from
networkx, dominance is checked pairwise, and the micro-instance enumerator
walks every stop sequence by brute force.
"""
from __future__ import annotations

import itertools
import math

import networkx as nx

from longhaul.roadnet.network import Edge, Network, Station, quantize_up
from longhaul.geo import Point, euclid_km

CONT, DAILY, WEEKLY = 4.5, 9.0, 56.0
REST_H = {"B": 0.75, "D": 11.0, "W": 45.0}
FUEL_H = 0.25
STOP_TYPES = ("F", "FB", "FD", "FW", "B", "D", "W")


def to_nx(net: Network) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(net.node_count))
    for e in net.edges:
        g.add_edge(e.node_a, e.node_b, weight=e.length)
    return g


def brute_k_paths(net: Network, o: int, d: int, k: int) -> list[tuple[float, tuple[int, ...]]]:
    """Every simple path, sorted by (length, node sequence), first k."""
    g = to_nx(net)
    out = []
    for p in nx.all_simple_paths(g, o, d):
        length = 0.0
        for a, b in zip(p, p[1:]):
            length += g[a][b]["weight"]
        out.append((length, tuple(p)))
    out.sort()
    return out[:k]


def quadratic_pareto(points):
    """O(n^2) filter on (fuel, duration) tuples; returns the sorted survivors."""
    keep = []
    for i, a in enumerate(points):
        beaten = False
        for j, b in enumerate(points):
            if i != j and b[0] <= a[0] and b[1] <= a[1] and (b[0] < a[0] or b[1] < a[1]):
                beaten = True
                break
        if not beaten:
            keep.append(a)
    return sorted(keep)


def hypervolume_2d(points, ref) -> float:
    """Area dominated by ``points`` inside the box bounded by ``ref``, by grid
    decomposition over the distinct coordinates (no sweep shortcut)."""
    pts = [p for p in points if p[0] < ref[0] and p[1] < ref[1]]
    if not pts:
        return 0.0
    xs = sorted({p[0] for p in pts} | {ref[0]})
    ys = sorted({p[1] for p in pts} | {ref[1]})
    area = 0.0
    for x0, x1 in zip(xs, xs[1:]):
        for y0, y1 in zip(ys, ys[1:]):
            if any(p[0] <= x0 and p[1] <= y0 for p in pts):
                area += (x1 - x0) * (y1 - y0)
    return area


def random_small_graph(rng, n: int, extra_edges: int, integer_lengths: bool = True) -> Network:
    """Connected graph on n nodes: a random spanning tree plus extra edges.
    Integer lengths make ties common, which exercises the ordering rule."""
    pts = tuple(Point(i * 1e-3, 0.0) for i in range(n))
    order = list(range(n))
    rng.shuffle(order)
    pairs = set()
    for i in range(1, n):
        a, b = order[i], order[int(rng.integers(0, i))]
        pairs.add((min(a, b), max(a, b)))
    candidates = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in pairs]
    rng.shuffle(candidates)
    pairs.update(candidates[:extra_edges])
    edges = []
    for a, b in sorted(pairs):
        if integer_lengths:
            length = float(rng.integers(1, 5))
        else:
            length = quantize_up(float(rng.uniform(1, 10)))
        edges.append(Edge(a, b, length))
    return Network(pts, tuple(edges), ())


# -- exhaustive micro-instance oracle --------------------------------------

class MicroOracle:
    """All feasible plans with up to ``depth`` stops, each leg driven on the
    fastest path between consecutive locations, every station and every
    stop type allowed at every step."""

    def __init__(self, net: Network, origin: int, dest: int, driver, fuel_l: float, tank_l: float,
                 km_per_liter: float = 3.5, depth: int = 3):
        self.net = net
        self.o, self.d = origin, dest
        self.driver = tuple(driver)
        self.fuel, self.tank = fuel_l, tank_l
        self.kmpl = km_per_liter
        self.depth = depth
        self.speed = net.speed
        self.mean_price = math.fsum(s.price for s in net.stations) / len(net.stations)
        self.dist = dict(nx.all_pairs_dijkstra_path_length(to_nx(net), weight="weight"))

    def leg(self, a: int, b: int) -> float | None:
        if a == b:
            return 0.0
        return self.dist[a].get(b)

    def evaluate(self, plan) -> tuple[float, float] | None:
        """plan: sequence of (station, stop type label); None when infeasible."""
        cont, daily, weekly = self.driver
        fuel = self.fuel
        here = self.o
        price = self.mean_price
        cost = 0.0
        clock = 0.0
        for st, label in list(plan) + [(None, None)]:
            target = self.d if st is None else st.node_id
            km = self.leg(here, target)
            if km is None:
                return None
            h = km / self.speed
            if h > min(cont, daily, weekly) + 1e-9 or km / self.kmpl > fuel + 1e-9:
                return None
            cont, daily, weekly = cont - h, daily - h, weekly - h
            fuel -= km / self.kmpl
            cost += km / self.kmpl * price
            clock += h
            if st is None:
                break
            rest = label.replace("F", "")
            clock += REST_H[rest] if rest else FUEL_H
            if "F" in label:
                fuel = self.tank
                price = st.price
            if rest:
                cont = CONT
                if rest in ("D", "W"):
                    daily = DAILY
                if rest == "W":
                    weekly = WEEKLY
            here = target
        return cost, clock

    def all_points(self) -> list[tuple[float, float, tuple]]:
        out = []
        choices = [(s, t) for s in self.net.stations for t in STOP_TYPES]
        for n in range(self.depth + 1):
            for plan in itertools.product(choices, repeat=n):
                v = self.evaluate(plan)
                if v is not None:
                    # rounding hides summation-order noise between equal plans
                    out.append((round(v[0], 9), round(v[1], 9), tuple((s.id, t) for s, t in plan)))
        return out

    def front(self) -> list[tuple[float, float]]:
        return quadratic_pareto(list({(c, t) for c, t, _ in self.all_points()}))


def micro_network(rng, n_nodes: int = 12, n_stations: int = 4, width: float = 420.0, height: float = 40.0) -> Network:
    """Nodes strung west to east in a narrow band so that every path passes
    close to most stations."""
    from longhaul.roadnet.network import gabriel_edges
    import numpy as np

    while True:
        xs = np.sort(rng.uniform(0, width, n_nodes))
        xs[0], xs[-1] = 0.0, width
        xy = np.column_stack((xs, rng.uniform(0, height, n_nodes)))
        try:
            pairs = gabriel_edges(xy)
        except Exception:
            continue
        g = nx.Graph(pairs)
        if g.number_of_nodes() == n_nodes and nx.is_connected(g):
            break
    pts = tuple(Point(float(x), float(y)) for x, y in xy)
    edges = tuple(
        Edge(a, b, quantize_up(euclid_km(pts[a], pts[b]) * float(rng.uniform(1.0, 1.2)))) for a, b in pairs
    )
    inner = rng.choice(np.arange(1, n_nodes - 1), size=n_stations, replace=False)
    stations = tuple(
        Station(i, int(v), round(float(rng.uniform(1.2, 1.7)), 3)) for i, v in enumerate(sorted(inner))
    )
    return Network(pts, edges, stations)


def micro_instances(count: int = 20, width: float = 240.0):
    """Seeded micro trips whose cheapest-in-stops plan needs one or two stops.

    Yields (seed, network, driver, fuel_l, tank_l, oracle).  Seeds that give
    a trip feasible without stops, or one needing three, are skipped."""
    import numpy as np

    seed = made = 0
    while made < count:
        seed += 1
        rng = np.random.default_rng(seed)
        net = micro_network(rng, width=width, height=width / 10)
        driver = (float(rng.uniform(1.0, 2.5)), 9.0, 56.0)
        fuel = float(rng.uniform(40.0, 65.0))
        oracle = MicroOracle(net, 0, net.node_count - 1, driver, fuel, 500.0)
        pts = oracle.all_points()
        if not pts or not 1 <= min(len(p[2]) for p in pts) <= 2:
            continue
        made += 1
        yield seed, net, driver, fuel, 500.0, oracle
