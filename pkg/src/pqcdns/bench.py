"""Benchmark harness: sequential single-client runs, concurrent
multi-client sessions, metric normalization, and CSV output.

The single-client loop performs one fresh connection and handshake per
query with the cache off, snapshots the connection byte counter around
each transaction, and appends one row per query.  The multi-client
driver launches a thread pool of independent single-query workers per
session.  Byte counts come from in-process counters, so the bandwidth
identity (handshake + framed query + framed response + close) is exact.
"""

from __future__ import annotations

import csv
import io
import os
import platform
import resource
import socket
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import mean

from . import channel, resolver, transport, wire
from .errors import (
    EmptyCsv,
    HandshakeFailure,
    PartialFailure,
    ResolverUnreachable,
    ZeroElapsed,
    ZeroSystemDelta,
)
from .policy import PolicyMode
from .suites import AlgorithmSuite, CryptoBackend, DEFAULT_BACKEND

DEFAULT_VCPUS = os.cpu_count() or 1
DEFAULT_TOTAL_MEMORY_MIB = 7810.3

QUERY_CSV_COLUMNS = ["timestamp", "latency_ms", "bandwidth_kb",
                     "cpu_client_pct", "cpu_server_pct", "mem_pct"]
COMPARISON_CSV_COLUMNS = ["kem", "ds", "mean_latency", "mean_bandwidth",
                          "mean_cpu_client", "mean_cpu_server", "mean_mem"]
SESSION_CSV_COLUMNS = ["session_id", "latency_ms", "bandwidth_kb"]


# --------------------------------------------------------------------------
# Normalization


def normalize_cpu_client(user_time: float, system_time: float,
                         elapsed: float, vcpus: int) -> float:
    if elapsed <= 0:
        raise ZeroElapsed(f"elapsed must be > 0, got {elapsed}")
    if vcpus < 1:
        raise ValueError(f"vcpus must be >= 1, got {vcpus}")
    return ((user_time + system_time) / elapsed * 100.0) / vcpus


def normalize_cpu_server(container_cpu_delta: float,
                         system_cpu_delta: float, vcpus: int = 1) -> float:
    if system_cpu_delta <= 0:
        raise ZeroSystemDelta(f"system CPU delta must be > 0, got {system_cpu_delta}")
    return container_cpu_delta / system_cpu_delta * 100.0


def memory_percent(peak_rss_kb: float, total_memory_mib: float) -> float:
    if total_memory_mib <= 0:
        raise ValueError(f"total memory must be > 0, got {total_memory_mib}")
    return (peak_rss_kb / 1024.0) / total_memory_mib * 100.0


# --------------------------------------------------------------------------
# Plans and samples


@dataclass
class BenchPlan:
    suite: AlgorithmSuite
    transport_kind: transport.TransportKind = transport.TransportKind.DOT
    dnssec: bool = False
    domain: str = "www.example.test"
    n: int = 10
    workers: int = 1
    sessions: int = 1
    vcpus: int = DEFAULT_VCPUS
    total_memory_mib: float = DEFAULT_TOTAL_MEMORY_MIB
    policy_mode: PolicyMode = PolicyMode.ALLOW_LEGACY

    def __post_init__(self):
        if self.n < 1 or self.workers < 1 or self.vcpus < 1:
            raise ValueError("n, workers, and vcpus must all be >= 1")


@dataclass
class PerfSample:
    t: float
    l: float   # latency ms
    b: float   # bandwidth kB
    c_client: float
    c_server: float
    m_client: float


@dataclass
class SessionResult:
    session_id: int
    delta_t: float   # ms
    delta_b: float   # kB
    peak_c_client: float = 0.0
    peak_c_server: float = 0.0
    peak_memory: float = 0.0
    failures: int = 0


@dataclass
class BenchSummary:
    samples: list[PerfSample]
    mean_latency: float
    mean_bandwidth: float
    mean_cpu_client: float
    mean_cpu_server: float
    mean_mem: float
    handshake_failures: int


# --------------------------------------------------------------------------
# Target plumbing


@dataclass
class BenchTarget:
    """A reachable endpoint plus the client config that can speak to it."""
    host: str
    port: int
    client_config: channel.ClientConfig
    transport_kind: transport.TransportKind
    endpoint: resolver.ResolverEndpoint | None = None

    def close(self):
        if self.endpoint is not None:
            self.endpoint.stop()


def launch_target(plan: BenchPlan,
                  backend: CryptoBackend = DEFAULT_BACKEND) -> BenchTarget:
    """Start a loopback endpoint matching the plan and build its client
    config.  DNSSEC zones sign with the suite's DNSSEC algorithm, falling
    back to the channel signature algorithm."""
    dnssec_alg = None
    if plan.dnssec:
        dnssec_alg = plan.suite.dnssec_sig or plan.suite.sig
    tree = resolver.build_zone_tree(dnssec_alg=dnssec_alg, backend=backend)
    ca = channel.CertificateAuthority(plan.suite.sig, backend)
    ident = channel.make_server_identity(plan.suite.sig, ca, backend)
    cfg = resolver.EndpointConfig(
        tree, ident, [plan.suite.kem], [plan.suite.sig], plan.policy_mode,
        plan.transport_kind, dnssec_enabled=plan.dnssec, backend=backend)
    endpoint = resolver.serve(cfg)
    ccfg = channel.ClientConfig([plan.suite.kem], [plan.suite.sig],
                                plan.policy_mode,
                                {plan.suite.sig.name: ca.public_key}, backend)
    return BenchTarget("127.0.0.1", endpoint.port, ccfg, plan.transport_kind,
                       endpoint)


def _one_query(plan: BenchPlan, target: BenchTarget) -> tuple[float, int, channel.Session]:
    """One full transaction: connect, handshake, query, close.

    Returns (latency seconds, total bytes on the wire, client session)."""
    t_start = time.perf_counter()
    try:
        client = resolver.ResolverClient(target.host, target.port,
                                         target.client_config,
                                         target.transport_kind)
    except (ConnectionRefusedError, socket.gaierror, OSError) as exc:
        raise ResolverUnreachable(str(exc)) from exc
    client.query(plan.domain, wire.TYPE_A, want_dnssec=plan.dnssec)
    client.close()
    t_end = time.perf_counter()
    return t_end - t_start, client.bytes_total, client.session


def validate_transcript(session: channel.Session):
    """Handshake transcript must match the registry-predicted byte total."""
    expected = channel.expected_handshake_bytes(session.suite)
    actual = session.transcript.total_bytes()
    fixed = (channel.algorithm_params(session.suite.sig).fixed_size
             and channel.algorithm_params(session.suite.kem).fixed_size)
    if fixed and actual != expected:
        raise HandshakeFailure(
            f"transcript {actual} B, expected {expected} B for "
            f"{session.suite.label()}")
    if not fixed and abs(actual - expected) > 64:
        raise HandshakeFailure(
            f"transcript {actual} B outside variable-length bound of "
            f"{expected} B for {session.suite.label()}")


# --------------------------------------------------------------------------
# Algorithm drivers


def run_benchmark(plan: BenchPlan, target: BenchTarget | None = None,
                  backend: CryptoBackend = DEFAULT_BACKEND,
                  csv_path: str | None = None,
                  comparison_csv_path: str | None = None) -> BenchSummary:
    """Sequential single-client benchmark: N transactions, fresh handshake
    each, one CSV row per query, means appended to the comparison CSV."""
    own_target = target is None
    if own_target:
        target = launch_target(plan, backend)
    samples: list[PerfSample] = []
    failures = 0
    server_cpu_prev = time.process_time()
    try:
        for _ in range(plan.n):
            ru_before = resource.getrusage(resource.RUSAGE_SELF)
            elapsed, total_bytes, session = _one_query(plan, target)
            ru_after = resource.getrusage(resource.RUSAGE_SELF)
            try:
                validate_transcript(session)
            except HandshakeFailure:
                failures += 1
                continue
            user = ru_after.ru_utime - ru_before.ru_utime
            system = ru_after.ru_stime - ru_before.ru_stime
            c_client = normalize_cpu_client(user, system, elapsed, plan.vcpus)
            server_cpu_now = time.process_time()
            # Endpoint shares the process; its CPU share over the window
            # stands in for the container-vs-system reading.
            c_server = normalize_cpu_server(
                max(0.0, server_cpu_now - server_cpu_prev),
                elapsed * plan.vcpus)
            server_cpu_prev = server_cpu_now
            m_client = memory_percent(ru_after.ru_maxrss, plan.total_memory_mib)
            samples.append(PerfSample(
                t=time.time(), l=elapsed * 1000.0, b=total_bytes / 1024.0,
                c_client=c_client, c_server=c_server, m_client=m_client))
    finally:
        if own_target:
            target.close()
    if not samples:
        summary = BenchSummary([], 0.0, 0.0, 0.0, 0.0, 0.0, failures)
    else:
        summary = BenchSummary(
            samples,
            mean(s.l for s in samples), mean(s.b for s in samples),
            mean(s.c_client for s in samples), mean(s.c_server for s in samples),
            mean(s.m_client for s in samples), failures)
    if csv_path is not None:
        write_query_csv(csv_path, plan, samples, backend)
    if comparison_csv_path is not None and samples:
        append_comparison_row(comparison_csv_path, plan, summary)
    return summary


def run_session(session_id: int, plan: BenchPlan,
                target: BenchTarget | None = None,
                backend: CryptoBackend = DEFAULT_BACKEND) -> SessionResult:
    """One multi-client session: ``plan.workers`` concurrent single-query
    workers; latency and bandwidth are whole-session deltas."""
    own_target = target is None
    if own_target:
        target = launch_target(plan, backend)
    byte_counts: list[int] = []
    errors: list[Exception] = []
    peak_rss = 0.0

    def worker():
        try:
            _, total_bytes, _ = _one_query(plan, target)
            return total_bytes
        except Exception as exc:
            return exc

    start = time.perf_counter()
    try:
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            for outcome in pool.map(lambda _: worker(), range(plan.workers)):
                if isinstance(outcome, Exception):
                    errors.append(outcome)
                else:
                    byte_counts.append(outcome)
        end = time.perf_counter()
        peak_rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    finally:
        if own_target:
            target.close()
    result = SessionResult(
        session_id=session_id,
        delta_t=(end - start) * 1000.0,
        delta_b=sum(byte_counts) / 1024.0,
        peak_memory=memory_percent(peak_rss, plan.total_memory_mib),
        failures=len(errors))
    if errors:
        raise PartialFailure(
            f"{len(errors)} of {plan.workers} workers failed "
            f"(first: {errors[0]})", failures=len(errors))
    return result


# --------------------------------------------------------------------------
# CSV output


def _metadata_lines(plan: BenchPlan, backend: CryptoBackend) -> list[str]:
    return [
        f"# suite: {plan.suite.label()}",
        f"# transport: {plan.transport_kind.value}",
        f"# dnssec: {int(plan.dnssec)}",
        f"# cache: off",
        f"# provider: {backend.provider}",
        f"# aead: {channel.AEAD_NAME}",
        f"# record_header_bytes: {channel.RECORD_HEADER}",
        f"# app_record_overhead_bytes: {channel.APP_RECORD_OVERHEAD}",
        f"# doh_overhead_bytes: {transport.DEFAULT_DOH_OVERHEAD}",
        f"# vcpus: {plan.vcpus}",
        f"# total_memory_mib: {plan.total_memory_mib}",
        f"# host: {platform.node()} {platform.machine()} {platform.system()}",
    ]


def write_query_csv(path: str, plan: BenchPlan, samples: list[PerfSample],
                    backend: CryptoBackend = DEFAULT_BACKEND):
    with open(path, "w", newline="") as fh:
        for line in _metadata_lines(plan, backend):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(QUERY_CSV_COLUMNS)
        for s in samples:
            writer.writerow([f"{s.t:.6f}", f"{s.l:.4f}", f"{s.b:.4f}",
                             f"{s.c_client:.4f}", f"{s.c_server:.4f}",
                             f"{s.m_client:.4f}"])


def append_comparison_row(path: str, plan: BenchPlan, summary: BenchSummary):
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(COMPARISON_CSV_COLUMNS)
        writer.writerow([plan.suite.kem.name, plan.suite.sig.name,
                         f"{summary.mean_latency:.4f}",
                         f"{summary.mean_bandwidth:.4f}",
                         f"{summary.mean_cpu_client:.4f}",
                         f"{summary.mean_cpu_server:.4f}",
                         f"{summary.mean_mem:.4f}"])


def write_session_csv(path: str, results: list[SessionResult]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SESSION_CSV_COLUMNS)
        for r in results:
            writer.writerow([r.session_id, f"{r.delta_t:.4f}", f"{r.delta_b:.4f}"])


def read_csv_rows(path_or_text: str, from_text: bool = False) -> list[dict]:
    """Read a results CSV, skipping the '#' metadata block."""
    if from_text:
        fh = io.StringIO(path_or_text)
    else:
        fh = open(path_or_text)
    with fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def summarize(path_or_text: str, from_text: bool = False) -> dict:
    """Column means of a per-query CSV; raises on no data rows."""
    rows = read_csv_rows(path_or_text, from_text)
    if not rows:
        raise EmptyCsv("no data rows to summarize")
    numeric = [c for c in rows[0] if c != "timestamp"]
    return {c: mean(float(r[c]) for r in rows) for c in numeric}
