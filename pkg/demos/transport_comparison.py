"""Bandwidth comparison across suites and transports.

Runs short loopback benchmarks for a grid of suites over DoT and DoH and
prints a table of per-query bandwidth, the DoH framing premium, and the
DNSSEC marginal.
"""

from pqcdns import bench
from pqcdns.suites import CryptoBackend, make_suite
from pqcdns.transport import TransportKind

GRID = [
    ("x25519", "ed25519"),
    ("mlkem512", "falcon512"),
    ("mlkem512", "mldsa44"),
    ("mlkem768", "mldsa65"),
    ("mlkem1024", "mldsa87"),
    ("mlkem512", "sphincssha2128f"),
]


def measure(backend, kem, sig, transport_kind, dnssec=False):
    plan = bench.BenchPlan(make_suite(kem, sig), transport_kind,
                           dnssec=dnssec, n=3)
    return bench.run_benchmark(plan, backend=backend).mean_bandwidth


def main():
    backend = CryptoBackend("simulated", seed=9)
    print(f"{'suite':<28} {'DoT kB':>8} {'DoH kB':>8} {'DoH-DoT':>8} "
          f"{'+DNSSEC':>8}")
    for kem, sig in GRID:
        dot = measure(backend, kem, sig, TransportKind.DOT)
        doh = measure(backend, kem, sig, TransportKind.DOH)
        signed = measure(backend, kem, sig, TransportKind.DOT, dnssec=True)
        print(f"{kem + '+' + sig:<28} {dot:>8.2f} {doh:>8.2f} "
              f"{doh - dot:>8.3f} {signed - dot:>8.2f}")


if __name__ == "__main__":
    main()
