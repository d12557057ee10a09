"""Time the compiled and pure-Python shortest-path kernels on generated networks.

    python benchmarks/bench_kernels.py [--repeat N]

Each backend runs the same single-source searches and the router's k-shortest
queries; the script checks that both return identical answers before printing timings.
"""
import argparse
import contextlib
import importlib
import statistics
import time

import numpy as np

from longhaul import _pykernels, kernels
from longhaul.roadnet import NetworkSpec, Router, generate_network

SIZES = {"1k": (150, 850), "5k": (600, 4400)}


def _time(fn, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


@contextlib.contextmanager
def using(impl):
    """Point the router at one backend for the duration of a timing."""
    saved = kernels.sssp, kernels.astar
    kernels.sssp, kernels.astar = impl.sssp, impl.astar
    try:
        yield
    finally:
        kernels.sssp, kernels.astar = saved


def k_paths(net, o, d, k):
    return Router(net, cache_size=0).k_shortest_node_paths(o, d, k)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        ck = importlib.import_module("longhaul._ckernels")
    except ImportError:
        ck = None
        print("compiled extension not built; timing the Python kernels only")
    backends = [("python", _pykernels)] + ([("cython", ck)] if ck else [])

    print(f"{'network':8} {'query':14} " + " ".join(f"{name:>10}" for name, _ in backends) + "   speedup")
    for label, (bb, local) in SIZES.items():
        net = generate_network(NetworkSpec(width_km=1200, height_km=350, backbone_node_count=bb,
                                           local_node_count=local, station_count=0, rng_seed=1))
        csr = net.csr
        xs = [p.x for p in net.points]
        o, d = xs.index(min(xs)), xs.index(max(xs))
        queries = {
            "sssp x5": lambda impl: [impl.sssp(*csr, s) for s in range(5)],
            "k-paths k=3": lambda impl: k_paths(net, o, d, 3),
        }
        for qname, q in queries.items():
            answers = []
            for _, impl in backends:
                with using(impl):
                    answers.append(q(impl))
            for other in answers[1:]:
                if qname.startswith("sssp"):
                    assert all(np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) for a, b in zip(answers[0], other))
                else:
                    assert other == answers[0]
            times = []
            for _, impl in backends:
                with using(impl):
                    times.append(_time(lambda impl=impl: q(impl), args.repeat))
            speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
            print(f"{label:8} {qname:14} " + " ".join(f"{t * 1000:8.1f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
