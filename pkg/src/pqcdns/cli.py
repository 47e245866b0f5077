"""Command-line entry point: serve, bench, session-bench, and matrix.

Exit codes: 0 success, 2 setup error (bad config, unknown algorithm,
missing zone file, bind failure), 3 benchmark completed with handshake
failures only.
"""

from __future__ import annotations

import argparse
import os
import signal
import sys

from . import bench, channel, resolver
from .config import RunConfig, check_transport_flags, parse_config
from .errors import PqcDnsError
from .policy import PolicyMode
from .suites import AlgorithmSuite, CryptoBackend, make_suite
from .transport import TransportKind

EXIT_OK = 0
EXIT_SETUP = 2
EXIT_HANDSHAKE_FAILURES = 3

# Level-matched suite grid for the matrix sweep.
MATRIX_SUITES = [
    ("mlkem512", "mldsa44"), ("mlkem512", "falcon512"),
    ("mlkem512", "sphincssha2128f"), ("mlkem512", "ed25519"),
    ("mlkem768", "mldsa65"), ("mlkem1024", "mldsa87"),
    ("x25519", "ed25519"), ("x25519mlkem512", "mldsa44"),
]


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--kem", help="key encapsulation algorithm")
    p.add_argument("--ds", help="channel signature algorithm")
    p.add_argument("--dnssec-alg", dest="dnssec_alg",
                   help="zone signing algorithm (defaults to --ds)")
    p.add_argument("--transport", choices=["dot", "doh", "udp"])
    p.add_argument("--dot", action="store_true", help="shorthand for --transport dot")
    p.add_argument("--doh", action="store_true", help="shorthand for --transport doh")
    p.add_argument("--udp", action="store_true", help="shorthand for --transport udp")
    p.add_argument("--dnssec", choices=["on", "off"])
    p.add_argument("--policy", choices=[m.value for m in PolicyMode])
    p.add_argument("--queries", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--sessions", type=int)
    p.add_argument("--out", help="output directory for CSVs")
    p.add_argument("--seed", type=int)
    p.add_argument("--provider", choices=["real", "simulated"])
    p.add_argument("--zone", help="zone file for the authoritative store")
    p.add_argument("--host")
    p.add_argument("--port", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcdns",
        description="DNS over post-quantum secure channels: server and benchmarks")
    sub = parser.add_subparsers(dest="role", required=True)
    for role in ("serve", "bench", "session-bench", "matrix"):
        _add_common_flags(sub.add_parser(role))
    return parser


def _resolve_config(args) -> RunConfig:
    check_transport_flags(args)
    overrides = {k: getattr(args, k) for k in
                 ("kem", "ds", "dnssec_alg", "transport", "dnssec", "policy",
                  "queries", "workers", "sessions", "out", "seed", "provider",
                  "zone", "host", "port")
                 if getattr(args, k, None) is not None}
    for name in ("dot", "doh", "udp"):
        if getattr(args, name, False):
            overrides["transport"] = name
    return parse_config(args.config, overrides)


def _backend(cfg: RunConfig) -> CryptoBackend:
    return CryptoBackend(cfg.provider, seed=cfg.seed)


def _plan(cfg: RunConfig) -> bench.BenchPlan:
    if cfg.zone is not None:
        resolver.load_zone(cfg.zone)  # fail early on a bad zone file
    suite = AlgorithmSuite(cfg.kem, cfg.ds, cfg.dnssec_alg)
    return bench.BenchPlan(suite, cfg.transport, dnssec=cfg.dnssec,
                           n=cfg.queries, workers=cfg.workers,
                           sessions=cfg.sessions, policy_mode=cfg.policy)


def _build_tree(cfg: RunConfig, backend: CryptoBackend) -> resolver.ZoneTree:
    dnssec_alg = (cfg.dnssec_alg or cfg.ds) if cfg.dnssec else None
    records = None
    if cfg.zone is not None:
        store = resolver.load_zone(cfg.zone)
        records = [rr for rrset in store.rrsets.values() for rr in rrset]
    return resolver.build_zone_tree(records=records, dnssec_alg=dnssec_alg,
                                    backend=backend)


def cmd_serve(cfg: RunConfig) -> int:
    backend = _backend(cfg)
    tree = _build_tree(cfg, backend)
    ca = channel.CertificateAuthority(cfg.ds, backend)
    ident = channel.make_server_identity(cfg.ds, ca, backend)
    endpoint = resolver.serve(resolver.EndpointConfig(
        tree, ident, [cfg.kem], [cfg.ds], cfg.policy, cfg.transport,
        dnssec_enabled=cfg.dnssec, host=cfg.host, port=cfg.port,
        backend=backend))
    print(f"listening on {cfg.host}:{endpoint.port} "
          f"({cfg.transport.value}, {cfg.kem.name}+{cfg.ds.name}, "
          f"policy {cfg.policy.value})")
    stop = []
    signal.signal(signal.SIGINT, lambda *_: stop.append(1))
    signal.signal(signal.SIGTERM, lambda *_: stop.append(1))
    try:
        while not stop:
            signal.pause()
    finally:
        print("counters:", endpoint.counters.snapshot())
        endpoint.stop()
    return EXIT_OK


def cmd_bench(cfg: RunConfig) -> int:
    backend = _backend(cfg)
    plan = _plan(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    name = f"{plan.suite.kem.name}_{plan.suite.sig.name}_{plan.transport_kind.value}"
    csv_path = os.path.join(cfg.out, f"queries_{name}.csv")
    cmp_path = os.path.join(cfg.out, f"{plan.transport_kind.value}_comparison_results.csv")
    summary = bench.run_benchmark(plan, backend=backend, csv_path=csv_path,
                                  comparison_csv_path=cmp_path)
    if not summary.samples:
        print(f"{summary.handshake_failures} handshake failures, no data",
              file=sys.stderr)
        return EXIT_HANDSHAKE_FAILURES
    print(f"{len(summary.samples)} queries: mean latency "
          f"{summary.mean_latency:.2f} ms, mean bandwidth "
          f"{summary.mean_bandwidth:.2f} kB -> {csv_path}")
    return EXIT_OK


def cmd_session_bench(cfg: RunConfig) -> int:
    backend = _backend(cfg)
    plan = _plan(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    target = bench.launch_target(plan, backend)
    results = []
    try:
        for sid in range(cfg.sessions):
            results.append(bench.run_session(sid, plan, target, backend))
    finally:
        target.close()
    path = os.path.join(cfg.out, "session_results.csv")
    bench.write_session_csv(path, results)
    print(f"{len(results)} sessions x {plan.workers} workers -> {path}")
    return EXIT_OK


def cmd_matrix(cfg: RunConfig) -> int:
    backend = _backend(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    for transport_kind in (TransportKind.DOT, TransportKind.DOH):
        for dnssec in (False, True):
            tag = f"{transport_kind.value}{'_dnssec' if dnssec else ''}"
            cmp_path = os.path.join(cfg.out, f"{tag}_comparison_results.csv")
            if os.path.exists(cmp_path):
                os.remove(cmp_path)
            for kem_name, sig_name in MATRIX_SUITES:
                plan = bench.BenchPlan(
                    make_suite(kem_name, sig_name),
                    transport_kind, dnssec=dnssec, n=cfg.queries,
                    policy_mode=cfg.policy)
                bench.run_benchmark(plan, backend=backend,
                                    comparison_csv_path=cmp_path)
            print(f"wrote {cmp_path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        handler = {"serve": cmd_serve, "bench": cmd_bench,
                   "session-bench": cmd_session_bench,
                   "matrix": cmd_matrix}[args.role]
        return handler(cfg)
    except FileNotFoundError as exc:
        print(f"setup error: {exc}", file=sys.stderr)
        return EXIT_SETUP
    except PqcDnsError as exc:
        print(f"setup error: {exc}", file=sys.stderr)
        return EXIT_SETUP


if __name__ == "__main__":
    sys.exit(main())
