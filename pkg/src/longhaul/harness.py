"""Benchmark instances, batch runs, comparison against current practice, reports."""
from __future__ import annotations

import csv
import io
import logging
import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baseline import CpResult, solve_cp
from .fuel import VehicleState
from .hos import DriverState
from .pareto import dominates, weakly_dominates
from .planner import PlannerParams, SolveResult, front_document, solve
from .roadnet.network import Network, NetworkSpec, dumps_document, generate_network
from .roadnet.provider import SyntheticProvider
from .roadnet.routing import Router

log = logging.getLogger(__name__)

NOMINAL_KM = (500, 1000, 1500)
SCENARIOS = {
    "b": (4.5, 4.5, 28.0),
    "d": (4.5, 9.0, 28.0),
    "w": (4.5, 9.0, 9.0),
}
FUEL_FRACS = (0.10, 0.25, 0.50, 0.75, 1.00)
DEFAULT_TANK_L = 500.0
DISTANCE_TOLERANCE = 0.10
BENCH_FORMAT_VERSION = 1

# one network per distance class; about 8 nodes per 1000 km2, 80% of them with a station
NETWORK_SHAPES = {
    500: dict(width_km=700.0, height_km=220.0, backbone_node_count=150, local_node_count=1100,
              station_count=1000, band_base_prices=(1.45, 1.60, 1.38)),
    1000: dict(width_km=1100.0, height_km=330.0, backbone_node_count=350, local_node_count=2550,
               station_count=2320, band_base_prices=(1.45, 1.60, 1.38, 1.52)),
    1500: dict(width_km=1500.0, height_km=420.0, backbone_node_count=600, local_node_count=4400,
               station_count=4000, band_base_prices=(1.45, 1.60, 1.38, 1.52, 1.41)),
}


class BenchmarkError(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    network: str
    origin: int
    dest: int
    nominal_km: int
    driver_scenario: str
    fuel_frac: float
    fastest_km: float
    tank_l: float = DEFAULT_TANK_L

    @property
    def label(self) -> str:
        return f"{self.nominal_km}_{self.driver_scenario}_{round(self.fuel_frac * 100)}"

    @property
    def driver0(self) -> DriverState:
        return DriverState(*SCENARIOS[self.driver_scenario])

    @property
    def vehicle0(self) -> VehicleState:
        return VehicleState(self.fuel_frac * self.tank_l, self.tank_l)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "network": self.network,
            "origin": self.origin,
            "dest": self.dest,
            "nominal_km": self.nominal_km,
            "driver_scenario": self.driver_scenario,
            "fuel_frac": self.fuel_frac,
            "tank_l": self.tank_l,
            "fastest_km": self.fastest_km,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceSpec":
        return cls(d["network"], int(d["origin"]), int(d["dest"]), int(d["nominal_km"]), d["driver_scenario"],
                   float(d["fuel_frac"]), float(d["fastest_km"]), float(d["tank_l"]))


@dataclass
class Benchmark:
    seed: int
    networks: dict[str, Network]
    instances: list[InstanceSpec]

    def to_dict(self) -> dict:
        return {
            "format_version": BENCH_FORMAT_VERSION,
            "kind": "instances",
            "seed": self.seed,
            "networks": sorted(self.networks),
            "instances": [i.to_dict() for i in self.instances],
        }


def pick_endpoints(net: Network, nominal_km: float, router: Router | None = None) -> tuple[int, int, float]:
    """Origin near the middle of the west edge; destination the node whose
    fastest-path distance is closest to the nominal one (lower id on ties)."""
    router = router or Router(net)
    xy = np.array([(p.x, p.y) for p in net.points])
    h = net.spec.height_km if net.spec else float(xy[:, 1].max())
    o = int(np.argmin((xy[:, 0] - xy[:, 0].min()) ** 2 + (xy[:, 1] - h / 2) ** 2))
    dist, _ = router.sssp(o)
    gap = np.abs(np.where(np.isfinite(dist), dist, np.inf) - nominal_km)
    d = int(np.argmin(gap))
    return o, d, float(dist[d])


def network_spec_for(nominal_km: int, seed: int) -> NetworkSpec:
    shape = NETWORK_SHAPES[nominal_km]
    return NetworkSpec(country_band_count=len(shape["band_base_prices"]), rng_seed=seed * 1000 + nominal_km, **shape)


def generate_benchmark(seed: int = 7, max_attempts: int = 5) -> Benchmark:
    networks: dict[str, Network] = {}
    instances: list[InstanceSpec] = []
    for nominal in NOMINAL_KM:
        for attempt in range(max_attempts):
            net = generate_network(network_spec_for(nominal, seed + 7919 * attempt))
            o, d, km = pick_endpoints(net, nominal)
            if abs(km - nominal) <= DISTANCE_TOLERANCE * nominal and o != d:
                break
        else:
            raise BenchmarkError(f"no network with a {nominal} km trip after {max_attempts} attempts")
        name = f"net{nominal}"
        networks[name] = net
        for scen in SCENARIOS:
            for frac in FUEL_FRACS:
                instances.append(InstanceSpec(name, o, d, nominal, scen, frac, km))
    return Benchmark(seed, networks, instances)


@dataclass
class InstanceRecord:
    spec: InstanceSpec
    result: SolveResult | None = None
    cp: CpResult | None = None
    runtime_s: float = 0.0
    error: str | None = None

    @property
    def label(self) -> str:
        return self.spec.label


def run_instance(spec: InstanceSpec, net: Network, params: PlannerParams, router: Router | None = None) -> InstanceRecord:
    rec = InstanceRecord(spec)
    t0 = time.perf_counter()
    try:
        router = router or Router(net)
        rec.result = solve(SyntheticProvider(net, router), spec.origin, spec.dest, spec.driver0, spec.vehicle0, params)
        rec.cp = solve_cp(SyntheticProvider(net, router), spec.origin, spec.dest, spec.driver0, spec.vehicle0, params)
    except Exception as exc:  # recorded, the batch goes on
        log.exception("instance %s failed", spec.label)
        rec.error = f"{type(exc).__name__}: {exc}"
    rec.runtime_s = time.perf_counter() - t0
    return rec


def run_benchmark(bench: Benchmark, params: PlannerParams | None = None, threads: int = 1) -> list[InstanceRecord]:
    params = params or PlannerParams()
    routers = {name: Router(net) for name, net in bench.networks.items()}

    def one(spec):
        return run_instance(spec, bench.networks[spec.network], params, routers[spec.network])

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            records = list(pool.map(one, bench.instances))
    else:
        records = [one(s) for s in bench.instances]
    return records  # pool.map keeps submission order, i.e. label order


# -- comparison with current practice ------------------------------------------

@dataclass
class ComparisonRow:
    label: str
    nominal_km: int
    scenario: str
    fuel_pct: int
    front_size: int
    cp_feasible: bool
    max_fuel_saving: float = math.nan  # most negative front - CP difference, eur
    max_time_saving: float = math.nan  # h
    max_fuel_saving_pct: float = math.nan
    max_time_saving_pct: float = math.nan
    dominating: int = 0  # front paths strictly dominating CP
    weakly_dominating: int = 0
    avg_fuel_saving: float = math.nan  # over dominating paths only
    avg_time_saving: float = math.nan
    avg_fuel_saving_pct: float = math.nan
    avg_time_saving_pct: float = math.nan
    mean_fuel_delta_per500: float = math.nan  # over all front paths, scaled to 500 km
    mean_time_delta: float = math.nan
    cheapest_not_worse: bool = False

    @property
    def status(self) -> str:
        return "OK" if self.cp_feasible else "CP_INFEASIBLE"


@dataclass
class Aggregate:
    rows: int
    compared: int
    mean_fuel_delta_per500: float
    mean_time_delta: float
    domination_ratio: float
    weak_domination_ratio: float
    cheapest_not_worse_ratio: float
    mean_front_size: float
    front_paths: int = 0

    def to_dict(self) -> dict:
        return dict(vars(self))


def _pct(diff: float, base: float) -> float:
    return 100.0 * diff / base if base else 0.0


def compare_row(spec: InstanceSpec, front: list, cp) -> ComparisonRow:
    """``front`` and ``cp`` carry ``fuel_cost_eur`` and ``total_h``."""
    row = ComparisonRow(spec.label, spec.nominal_km, spec.driver_scenario, round(spec.fuel_frac * 100),
                        len(front), cp is not None)
    if cp is None or not front:
        return row
    cf, ct = cp.fuel_cost_eur, cp.total_h
    dfuel = [p.fuel_cost_eur - cf for p in front]
    dtime = [p.total_h - ct for p in front]
    row.max_fuel_saving = min(dfuel)
    row.max_time_saving = min(dtime)
    row.max_fuel_saving_pct = _pct(row.max_fuel_saving, cf)
    row.max_time_saving_pct = _pct(row.max_time_saving, ct)
    cpv = cp.objectives
    dom = [i for i, p in enumerate(front) if dominates(p.objectives, cpv)]
    row.dominating = len(dom)
    row.weakly_dominating = sum(weakly_dominates(p.objectives, cpv) for p in front)
    if dom:
        row.avg_fuel_saving = statistics.fmean(dfuel[i] for i in dom)
        row.avg_time_saving = statistics.fmean(dtime[i] for i in dom)
        row.avg_fuel_saving_pct = _pct(row.avg_fuel_saving, cf)
        row.avg_time_saving_pct = _pct(row.avg_time_saving, ct)
    scale = 500.0 / spec.fastest_km
    row.mean_fuel_delta_per500 = statistics.fmean(d * scale for d in dfuel)
    row.mean_time_delta = statistics.fmean(dtime)
    row.cheapest_not_worse = min(p.fuel_cost_eur for p in front) <= cf
    return row


def compare_savings(records: list[InstanceRecord]) -> tuple[list[ComparisonRow], Aggregate]:
    rows = []
    for rec in records:
        front = rec.result.front if rec.result else []
        cp = rec.cp.path if rec.cp and rec.cp.feasible else None
        rows.append(compare_row(rec.spec, front, cp))
    return rows, aggregate(rows)


def aggregate(rows: list[ComparisonRow]) -> Aggregate:
    used = [r for r in rows if r.cp_feasible and r.front_size]
    paths = sum(r.front_size for r in used)

    def mean(vals):
        vals = list(vals)
        return statistics.fmean(vals) if vals else math.nan

    return Aggregate(
        rows=len(rows),
        compared=len(used),
        mean_fuel_delta_per500=mean(r.mean_fuel_delta_per500 for r in used),
        mean_time_delta=mean(r.mean_time_delta for r in used),
        domination_ratio=sum(r.dominating for r in used) / paths if paths else math.nan,
        weak_domination_ratio=sum(r.weakly_dominating for r in used) / paths if paths else math.nan,
        cheapest_not_worse_ratio=mean(float(r.cheapest_not_worse) for r in used),
        mean_front_size=mean(r.front_size for r in rows if r.front_size),
        front_paths=paths,
    )


def front_size_warning(agg: Aggregate, lo: float = 1.0, hi: float = 10.0) -> str | None:
    m = agg.mean_front_size
    if math.isnan(m) or not lo <= m <= hi:
        msg = f"mean front size {m:.2f} outside [{lo:g}, {hi:g}]"
        log.warning(msg)
        return msg
    return None


# -- reports ---------------------------------------------------------------

SUMMARY_COLUMNS = ("label", "total_paths", "nondominated", "runtime_s", "provider_calls",
                   "evaluated_fuel_stops", "evaluated_rest_stops")
COMPARISON_COLUMNS = (
    "label", "km", "hos", "fuel", "status",
    "max_abs_fuel_eur", "max_abs_time_h", "max_pct_fuel", "max_pct_time",
    "routes_dom_cp",
    "avg_abs_fuel_eur", "avg_abs_time_h", "avg_pct_fuel", "avg_pct_time",
)


def _num(x: float, digits: int = 6) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.{digits}f}"


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def summary_csv(records: list[InstanceRecord], timings: bool = False) -> str:
    cols = [c for c in SUMMARY_COLUMNS if timings or c != "runtime_s"]
    out = [cols]
    for rec in records:
        d = rec.result.diagnostics if rec.result else None
        vals = {
            "label": rec.label,
            "total_paths": d.total_feasible_paths if d else "",
            "nondominated": len(rec.result.front) if rec.result else "",
            "runtime_s": f"{rec.runtime_s:.3f}",
            "provider_calls": d.provider_calls if d else "",
            "evaluated_fuel_stops": d.evaluated_fuel_stops if d else "",
            "evaluated_rest_stops": d.evaluated_rest_stops if d else "",
        }
        out.append([vals[c] for c in cols])
    return _csv(out)


def comparison_csv(rows: list[ComparisonRow]) -> str:
    out = [list(COMPARISON_COLUMNS)]
    for r in rows:
        out.append([
            r.label, r.nominal_km, r.scenario, r.fuel_pct, r.status,
            _num(r.max_fuel_saving), _num(r.max_time_saving), _num(r.max_fuel_saving_pct), _num(r.max_time_saving_pct),
            f"{r.dominating}/{r.front_size}",
            _num(r.avg_fuel_saving), _num(r.avg_time_saving), _num(r.avg_fuel_saving_pct), _num(r.avg_time_saving_pct),
        ])
    return _csv(out)


def scatter_svg(front: list, cp=None, title: str = "", width: int = 480, height: int = 360) -> str:
    """Front points as blue circles, the current-practice point as a red one."""
    pts = [(p.fuel_cost_eur, p.total_h) for p in front]
    allpts = pts + ([(cp.fuel_cost_eur, cp.total_h)] if cp is not None else [])
    m = 50
    if allpts:
        x0, x1 = min(p[0] for p in allpts), max(p[0] for p in allpts)
        y0, y1 = min(p[1] for p in allpts), max(p[1] for p in allpts)
    else:
        x0 = y0 = 0.0
        x1 = y1 = 1.0
    padx = (x1 - x0) * 0.1 or 1.0
    pady = (y1 - y0) * 0.1 or 0.1
    x0, x1, y0, y1 = x0 - padx, x1 + padx, y0 - pady, y1 + pady

    def sx(x):
        return m + (x - x0) / (x1 - x0) * (width - 2 * m)

    def sy(y):
        return height - m - (y - y0) / (y1 - y0) * (height - 2 * m)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{m}" y1="{height - m}" x2="{width - m}" y2="{height - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{height - m}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">fuel cost (eur) {x0 + padx:.2f} to {x1 - padx:.2f}</text>',
        f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {height / 2:.1f})">duration (h) {y0 + pady:.2f} to {y1 - pady:.2f}</text>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for x, y in pts:
        lines.append(f'<circle class="front" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="steelblue"/>')
    if cp is not None:
        lines.append(
            f'<circle class="cp" cx="{sx(cp.fuel_cost_eur):.2f}" cy="{sy(cp.total_h):.2f}" r="6" fill="none" stroke="crimson" stroke-width="2"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def instance_documents(rec: InstanceRecord, params: PlannerParams) -> tuple[dict | None, dict | None]:
    s = rec.spec
    common = dict(origin=s.origin, dest=s.dest, driver0=s.driver0, vehicle0=s.vehicle0, params=params, label=s.label)
    front = cp = None
    if rec.result is not None:
        front = front_document(rec.result.front, mean_price=rec.result.mean_price,
                               diagnostics=rec.result.diagnostics.to_dict(), tag="front", **common)
    if rec.cp is not None:
        cp_paths = [rec.cp.path] if rec.cp.feasible else []
        cp = front_document(cp_paths, mean_price=rec.cp.mean_price, diagnostics={"message": rec.cp.message,
                            "provider_calls": rec.cp.provider_calls}, tag="CP", **common)
    return front, cp


def emit_reports(bench: Benchmark | None, records: list[InstanceRecord], rows: list[ComparisonRow], out_dir: str,
                 params: PlannerParams, timings: bool = False) -> list[str]:
    """Write everything in label order; returns the written paths."""
    written = []
    for sub in ("fronts", "cp", "plots", "networks"):
        try:
            os.makedirs(os.path.join(out_dir, sub), exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create {os.path.join(out_dir, sub)}: {exc.strerror or exc}") from exc

    def put(rel, text):
        p = os.path.join(out_dir, rel)
        _write(p, text)
        written.append(p)

    if bench is not None:
        put("instances.json", dumps_document(bench.to_dict()))
        for name in sorted(bench.networks):
            put(os.path.join("networks", f"{name}.json"), bench.networks[name].dumps())
    by_label = {r.label: r for r in rows}
    for rec in records:
        front, cp = instance_documents(rec, params)
        if front is not None:
            put(os.path.join("fronts", f"{rec.label}.json"), dumps_document(front))
        if cp is not None:
            put(os.path.join("cp", f"{rec.label}.json"), dumps_document(cp))
        cp_path = rec.cp.path if rec.cp and rec.cp.feasible else None
        row = by_label.get(rec.label)
        title = rec.label + ("" if row is None or row.cp_feasible else " (CP infeasible)")
        put(os.path.join("plots", f"{rec.label}.svg"),
            scatter_svg(rec.result.front if rec.result else [], cp_path, title))
    put("summary.csv", summary_csv(records, timings))
    put("comparison.csv", comparison_csv(rows))
    agg = aggregate(rows)
    put("aggregate.json", dumps_document({"format_version": BENCH_FORMAT_VERSION, "kind": "aggregate",
                                           **{k: (None if isinstance(v, float) and math.isnan(v) else v)
                                              for k, v in agg.to_dict().items()}}))
    return written
