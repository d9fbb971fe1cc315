#!/usr/bin/env python3
"""
Benchmark script timing strip scans and classification over the census graphs
for several worker counts.
"""

import os
import time

import pandas as pd

from clstrata.catalog import census_entries, load_entry
from clstrata.cl_structures import classify, enumerate_strips
from clstrata.parallel import THREADS_ENV
from clstrata.realizability import oracle_orientably_realizable


def time_call(func, repeats):
    """Average wall time of func() over repeats calls"""
    times = []
    for _ in range(repeats):
        start_time = time.time()
        func()
        times.append(time.time() - start_time)
    return sum(times) / repeats


def benchmark_census(worker_counts, repeats=3):
    """
    Time the strip scan and the full classification of each census graph

    Args:
        worker_counts: Values of CLSTRATA_THREADS to test
        repeats: Number of times to repeat each measurement for averaging

    Returns:
        DataFrame with one row per (graph, workers)
    """
    rows = []
    for workers in worker_counts:
        os.environ[THREADS_ENV] = str(workers)
        print(f"Benchmarking with {workers} worker(s)...")
        for entry in census_entries():
            scan = time_call(lambda: enumerate_strips(entry.graph, entry.rotation), repeats)
            full = time_call(lambda: classify(entry.graph, entry.rotation, name=entry.name), repeats)
            rows.append({"graph": entry.name, "workers": workers, "scan_s": scan, "classify_s": full})
            print(f"  {entry.name}: scan {scan:.4f}s, classify {full:.4f}s")
    return pd.DataFrame(rows)


def benchmark_oracle(worker_counts):
    """Time the exhaustive oracle on the Petersen graph"""
    g = load_entry("petersen").graph
    rows = []
    for workers in worker_counts:
        os.environ[THREADS_ENV] = str(workers)
        elapsed = time_call(lambda: oracle_orientably_realizable(g), 1)
        rows.append({"workers": workers, "oracle_s": elapsed})
        print(f"  Petersen oracle with {workers} worker(s): {elapsed:.2f}s")
    return pd.DataFrame(rows)


def main():
    worker_counts = [1, 2, 4]

    census = benchmark_census(worker_counts)
    print("\nClassification time (seconds):")
    print(census.pivot(index="graph", columns="workers", values="classify_s").to_string())

    serial = census[census["workers"] == 1].set_index("graph")["classify_s"]
    for workers in worker_counts[1:]:
        parallel = census[census["workers"] == workers].set_index("graph")["classify_s"]
        print(f"Speedup with {workers} workers: {(serial / parallel).mean():.2f}x")

    print("\nOracle:")
    benchmark_oracle(worker_counts)


if __name__ == "__main__":
    main()
