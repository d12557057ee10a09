import time

import pytest

from longhaul.harness import compare_savings, generate_benchmark, run_benchmark
from longhaul.planner import PlannerParams


@pytest.fixture(scope="session")
def bench():
    return generate_benchmark(7)


@pytest.fixture(scope="session")
def bench_run(bench):
    """The default-seed benchmark solved once; shared by the acceptance checks."""
    t0 = time.perf_counter()
    records = run_benchmark(bench, PlannerParams())
    elapsed = time.perf_counter() - t0
    rows, agg = compare_savings(records)
    return {"records": records, "rows": rows, "agg": agg, "elapsed_s": elapsed}
