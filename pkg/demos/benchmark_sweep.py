"""End-to-end benchmark sweep producing the comparison CSVs.

Equivalent to `pqcdns matrix --queries 3 --seed 21 --out results/`, but as
a library-driven script that also prints the summaries as they land.
"""

import os
import sys

from pqcdns import bench
from pqcdns.suites import CryptoBackend, make_suite
from pqcdns.transport import TransportKind

SUITES = [
    ("mlkem512", "mldsa44"), ("mlkem512", "falcon512"),
    ("mlkem512", "ed25519"), ("mlkem768", "mldsa65"),
    ("mlkem1024", "mldsa87"), ("x25519mlkem512", "mldsa44"),
]


def main(out_dir="results"):
    backend = CryptoBackend("simulated", seed=21)
    os.makedirs(out_dir, exist_ok=True)
    for transport_kind in (TransportKind.DOT, TransportKind.DOH):
        cmp_path = os.path.join(
            out_dir, f"{transport_kind.value}_comparison_results.csv")
        if os.path.exists(cmp_path):
            os.remove(cmp_path)
        print(f"\n{transport_kind.value.upper()}:")
        for kem, sig in SUITES:
            plan = bench.BenchPlan(make_suite(kem, sig), transport_kind, n=3)
            summary = bench.run_benchmark(
                plan, backend=backend, comparison_csv_path=cmp_path)
            print(f"  {plan.suite.label():<28} "
                  f"latency {summary.mean_latency:6.2f} ms  "
                  f"bandwidth {summary.mean_bandwidth:6.2f} kB")
        print(f"  -> {cmp_path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
