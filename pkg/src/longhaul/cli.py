"""Command-line entry point: gen-net, plan, cp, bench, verify.

Exit codes: 0 success, 1 usage error, 2 infeasible or empty result (or a
failed audit), 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass

from .audit import audit_document
from .baseline import solve_cp
from .fuel import FuelModel, VehicleState
from .harness import (
    compare_savings,
    emit_reports,
    front_size_warning,
    generate_benchmark,
    run_benchmark,
    scatter_svg,
)
from .hos import DriverState
from .planner import PlannerParams, front_document, solve
from .roadnet.network import Network, NetworkSpec, dumps_document, generate_network
from .roadnet.provider import RecordingProvider, ReplayMiss, ReplayProvider, SyntheticProvider

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("longhaul")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str, n: int | None = None) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _driver(text: str) -> tuple[float, float, float]:
    return _floats(text, 3)


def _fraction(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{v} is outside [0, 1]")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be >= 1")
    return v


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("planner parameters")
    g.add_argument("--k", type=_positive_int, default=3, help="temporary paths per node")
    g.add_argument("--sigma", type=float, default=1.1, help="detour cap on temporary paths")
    g.add_argument("--beta", type=float, default=0.10, help="tank fraction opening the refuel window")
    g.add_argument("--gamma", type=float, default=0.05, help="tank fraction closing the refuel window")
    g.add_argument("--delta", type=float, default=0.05, help="driving budget fraction left at the rest anchor")
    g.add_argument("--radius", type=float, default=5.0, help="radius search, km")
    g.add_argument("--interval", type=float, default=5.0, help="spacing of radius searches, km")
    g.add_argument("--min-rest-window", type=float, default=10.0, help="floor of the rest window, minutes")
    g.add_argument("--km-per-liter", type=float, default=3.5)
    g.add_argument("--max-tree-nodes", type=_positive_int, default=200_000)
    g.add_argument("--max-depth", type=_positive_int, default=12)
    g.add_argument("--threads", type=_positive_int, default=1)


def _add_trip(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--network", help="network file")
    src.add_argument("--replay", help="serve queries from a recorded replay file instead of a network")
    p.add_argument("--record", help="write every provider query and answer to this replay file")
    p.add_argument("--origin", type=int, required=True)
    p.add_argument("--dest", type=int, required=True)
    p.add_argument("--driver", type=_driver, default=(4.5, 9.0, 56.0), help="cont,daily,weekly hours left")
    p.add_argument("--fuel-frac", type=_fraction, required=True, help="initial tank fraction in [0, 1]")
    p.add_argument("--tank", type=float, default=500.0, help="tank capacity, liters")
    p.add_argument("--out", required=True, help="front document to write")
    p.add_argument("--svg", help="scatter plot of the result")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="longhaul", description="Fuel-cost / duration route planning for long-haul trucks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-net", help="generate a synthetic road network")
    g.add_argument("--spec", help="network spec JSON file (overrides the inline flags)")
    d = NetworkSpec()
    g.add_argument("--width", type=float, default=d.width_km)
    g.add_argument("--height", type=float, default=d.height_km)
    g.add_argument("--backbone", type=int, default=d.backbone_node_count)
    g.add_argument("--local", type=int, default=d.local_node_count)
    g.add_argument("--stations", type=int, default=d.station_count)
    g.add_argument("--prices", type=_floats, default=d.band_base_prices, help="base price per country band")
    g.add_argument("--perturbation", type=float, default=d.price_perturbation)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    p = sub.add_parser("plan", help="compute the front of fuel-cost / duration paths")
    _add_trip(p)
    _add_params(p)

    c = sub.add_parser("cp", help="run the current-practice baseline")
    _add_trip(c)
    _add_params(c)

    b = sub.add_parser("bench", help="run the 45-instance benchmark")
    b.add_argument("--seed", type=int, default=7)
    b.add_argument("--out-dir", required=True)
    b.add_argument("--timings", action="store_true", help="add wall times to summary.csv (not reproducible)")
    _add_params(b)

    v = sub.add_parser("verify", help="re-simulate a front document on its network")
    v.add_argument("--path-file", required=True)
    v.add_argument("--network", required=True)
    return parser


@dataclass
class Command:
    name: str
    args: argparse.Namespace
    params: PlannerParams | None = None
    spec: NetworkSpec | None = None
    driver: DriverState | None = None
    vehicle: VehicleState | None = None


def _params(a) -> PlannerParams:
    return PlannerParams(
        k=a.k, sigma=a.sigma, beta=a.beta, gamma=a.gamma, delta=a.delta, radius_km=a.radius,
        interval_km=a.interval, min_rest_window_h=a.min_rest_window / 60.0,
        max_tree_nodes=a.max_tree_nodes, max_depth=a.max_depth, threads=a.threads,
        fuel_model=FuelModel(a.km_per_liter),
    )


def parse(argv: list[str] | None = None) -> Command:
    """Parse and validate; raises UsageError on any bad input."""
    a = build_parser().parse_args(argv)
    cmd = Command(a.command, a)
    try:
        if a.command in ("plan", "cp", "bench"):
            cmd.params = _params(a)
        if a.command in ("plan", "cp"):
            cmd.driver = DriverState(*a.driver)
            cmd.vehicle = VehicleState(a.fuel_frac * a.tank, a.tank)
            if a.origin == a.dest:
                raise ValueError("origin and destination must differ")
        if a.command == "gen-net" and a.spec is None:
            cmd.spec = NetworkSpec(
                width_km=a.width, height_km=a.height, backbone_node_count=a.backbone, local_node_count=a.local,
                station_count=a.stations, country_band_count=len(a.prices), band_base_prices=a.prices,
                price_perturbation=a.perturbation, rng_seed=a.seed,
            )
    except (ValueError, TypeError) as exc:
        raise UsageError(f"longhaul {a.command}: {exc}") from None
    return cmd


def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_text(path: str, text: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _provider(a, need_nodes=()):
    if a.replay:
        inner = ReplayProvider.load(a.replay)
    else:
        net = Network.load(a.network)
        for v in need_nodes:
            if not 0 <= v < net.node_count:
                raise UsageError(f"node {v} is not in the network ({net.node_count} nodes)")
        inner = SyntheticProvider(net)
    return RecordingProvider(inner) if a.record else inner


def _run_gen_net(cmd: Command) -> int:
    a = cmd.args
    spec = NetworkSpec.from_dict(_read_json(a.spec)) if a.spec else cmd.spec
    net = generate_network(spec)
    net.save(a.out)
    print(f"wrote {a.out}: {net.node_count} nodes, {len(net.edges)} edges, {len(net.stations)} stations")
    return EXIT_OK


def _run_trip(cmd: Command) -> int:
    a = cmd.args
    prov = _provider(a, (a.origin, a.dest))
    mean = prov.mean_station_price
    if cmd.name == "plan":
        res = solve(prov, a.origin, a.dest, cmd.driver, cmd.vehicle, cmd.params)
        paths, diag, tag = res.front, res.diagnostics.to_dict(), "front"
    else:
        res = solve_cp(prov, a.origin, a.dest, cmd.driver, cmd.vehicle, cmd.params)
        paths = [res.path] if res.feasible else []
        diag, tag = {"message": res.message, "provider_calls": res.provider_calls}, "CP"
    doc = front_document(paths, origin=a.origin, dest=a.dest, driver0=cmd.driver, vehicle0=cmd.vehicle,
                         params=cmd.params, mean_price=mean, diagnostics=diag, tag=tag)
    _write_text(a.out, dumps_document(doc))
    if a.svg:
        _write_text(a.svg, scatter_svg(paths if tag == "front" else [], paths[0] if tag == "CP" and paths else None,
                                       f"{a.origin} to {a.dest}"))
    if a.record:
        prov.save(a.record)
    for p in paths:
        print(f"path {p.id}: {p.fuel_cost_eur:.2f} eur, {p.total_h:.2f} h, "
              f"stops {' '.join(s.types for s in p.stops) or '-'}")
    if not paths:
        print(f"no feasible path: {diag.get('message', '')}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _run_bench(cmd: Command) -> int:
    a = cmd.args
    t0 = time.perf_counter()
    bench = generate_benchmark(a.seed)
    records = run_benchmark(bench, cmd.params, threads=a.threads)
    rows, agg = compare_savings(records)
    emit_reports(bench, records, rows, a.out_dir, cmd.params, timings=a.timings)
    failed = [r.label for r in records if r.error]
    print(f"{len(records)} instances in {time.perf_counter() - t0:.1f} s; {len(failed)} failed")
    print(f"mean front size {agg.mean_front_size:.2f}; front paths weakly dominating CP "
          f"{agg.weak_domination_ratio:.1%}; cheapest path no dearer than CP in {agg.cheapest_not_worse_ratio:.1%}")
    warning = front_size_warning(agg)
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


def _run_verify(cmd: Command) -> int:
    a = cmd.args
    net = Network.load(a.network)
    doc = _read_json(a.path_file)
    report = audit_document(net, doc)
    for line in report.lines():
        print(line)
    print(f"{len(report.paths)} paths checked: {'ok' if report.ok else 'MISMATCH'}")
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


RUNNERS = {
    "gen-net": _run_gen_net,
    "plan": _run_trip,
    "cp": _run_trip,
    "bench": _run_bench,
    "verify": _run_verify,
}


def run(cmd: Command) -> int:
    try:
        return RUNNERS[cmd.name](cmd)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ReplayMiss as exc:
        print(f"replay: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"I/O error{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, TypeError) as exc:  # includes JSONDecodeError
        print(f"malformed input document: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv: list[str] | None = None) -> int:
    try:
        cmd = parse(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if cmd.args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(cmd)


if __name__ == "__main__":
    sys.exit(main())
