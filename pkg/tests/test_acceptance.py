"""Acceptance suite: one test per release criterion, one pass/fail line
each on the terminal."""

import random
import socket
import sys
import time

import pytest

from conftest import handshake_pair
from pqcdns import bench, channel, dnssec, perfmodel, resolver, transport, wire
from pqcdns.policy import (
    PASS,
    PolicyMode,
    TRUNCATE_AND_FLAG,
    enforce_negotiation,
    fragmentation_guard,
)
from pqcdns.suites import (
    CryptoBackend,
    DeploymentClass,
    Kind,
    all_algorithms,
    classify_profile,
    make_suite,
)
from pqcdns.transport import TransportKind

BACKEND = CryptoBackend("simulated", seed=2024)

# Level-matched suite grid mirroring the per-level evaluation tables.
LEVEL_SUITES = [(k, s) for k in all_algorithms(Kind.KEM)
                for s in all_algorithms(Kind.SIGNATURE)
                if k.security_level == s.security_level]


def report(name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] {name}"
    if detail:
        line += f" ({detail})"
    print(line, file=sys.__stdout__, flush=True)
    assert ok, line


def _mean_bandwidth(kem, sig, transport_kind=TransportKind.DOT,
                    dnssec_on=False, n=3, backend=BACKEND):
    plan = bench.BenchPlan(make_suite(kem, sig), transport_kind,
                           dnssec=dnssec_on, n=n)
    return bench.run_benchmark(plan, backend=backend).mean_bandwidth


def test_c01_crypto_correctness_matrix():
    """Every level-matched suite completes 100 handshakes with equal keys."""
    start = time.monotonic()
    checked = 0
    for kem, sig in LEVEL_SUITES:
        for _ in range(100):
            client, server, err = handshake_pair(kem, sig, BACKEND)
            assert err is None, f"{kem.name}+{sig.name}: {err}"
            assert client.keys == server.keys, f"{kem.name}+{sig.name}"
            client.conn.close()
            server.conn.close()
            checked += 1
    elapsed = time.monotonic() - start
    report("crypto correctness matrix",
           elapsed < 300,
           f"{len(LEVEL_SUITES)} suites, {checked} handshakes, {elapsed:.1f}s")


def test_c02_byte_accounting_exact():
    """Measured handshake bytes equal framing constant plus artifact sizes."""
    ok = True
    for kem, sig in LEVEL_SUITES:
        client, server, _ = handshake_pair(kem, sig, BACKEND)
        expected = channel.expected_handshake_bytes(client.suite)
        ok = ok and client.conn.total_bytes == expected
        ok = ok and client.transcript.total_bytes() == expected
        client.conn.close()
        server.conn.close()
    # Real provider: variable-length signatures stay within their bound.
    real = CryptoBackend("real")
    for kem_name, sig_name in [("x25519", "ed25519"),
                               ("secp256r1", "ecdsa-p256")]:
        suite = make_suite(kem_name, sig_name)
        client, server, _ = handshake_pair(suite.kem, suite.sig, real)
        expected = channel.expected_handshake_bytes(suite)
        ok = ok and abs(client.conn.total_bytes - expected) <= 32
        client.conn.close()
        server.conn.close()
    report("byte-accounting exactness", ok,
           f"{len(LEVEL_SUITES)} simulated suites exact, real EC within bound")


def test_c03_bandwidth_ordering_level1_dot():
    """At level 1 over DoT with mlkem512: SPHINCS+ > ML-DSA > Falcon >
    legacy, and the ML-DSA-vs-Falcon delta is about 4 kB."""
    b = {sig: _mean_bandwidth("mlkem512", sig)
         for sig in ("sphincssha2128f", "mldsa44", "falcon512", "ed25519")}
    ordering = (b["sphincssha2128f"] > b["mldsa44"] > b["falcon512"]
                > b["ed25519"])
    delta = b["mldsa44"] - b["falcon512"]
    delta_ok = abs(delta - 4.00) <= 0.30 * 4.00
    report("table bandwidth ordering at level 1 over DoT",
           ordering and delta_ok,
           f"{b['sphincssha2128f']:.2f} > {b['mldsa44']:.2f} > "
           f"{b['falcon512']:.2f} > {b['ed25519']:.2f} kB, "
           f"delta {delta:.2f} kB")


def test_c04_doh_dot_delta():
    """DoH-minus-DoT per-query delta in [0.1, 0.5] kB for >= 90% of suites."""
    pairs = [("mlkem512", "mldsa44"), ("mlkem512", "falcon512"),
             ("mlkem512", "ed25519"), ("mlkem512", "sphincssha2128f"),
             ("mlkem768", "mldsa65"), ("mlkem1024", "mldsa87"),
             ("x25519", "ed25519"), ("x25519mlkem512", "mldsa44"),
             ("hqc128", "falconpadded512"), ("mlkem1024", "falcon1024")]
    in_window = 0
    deltas = []
    for kem, sig in pairs:
        delta = (_mean_bandwidth(kem, sig, TransportKind.DOH, n=2)
                 - _mean_bandwidth(kem, sig, TransportKind.DOT, n=2))
        deltas.append(delta)
        if 0.1 <= delta <= 0.5:
            in_window += 1
    report("DoH-DoT per-query bandwidth delta", in_window >= 0.9 * len(pairs),
           f"{in_window}/{len(pairs)} suites in [0.1, 0.5] kB, "
           f"mean {sum(deltas)/len(deltas):.3f} kB")


def test_c05_security_level_monotonicity():
    """ML-KEM + ML-DSA bandwidth strictly increases across levels 1/3/5."""
    b1 = _mean_bandwidth("mlkem512", "mldsa44")
    b3 = _mean_bandwidth("mlkem768", "mldsa65")
    b5 = _mean_bandwidth("mlkem1024", "mldsa87")
    ratio = b5 / b1
    report("security-level monotonicity",
           b1 < b3 < b5 and 1.3 <= ratio <= 2.3,
           f"{b1:.2f} < {b3:.2f} < {b5:.2f} kB, ratio {ratio:.2f}")


def test_c06_dnssec_marginal_bandwidth():
    """The DNSSEC-on marginal for ML-DSA exceeds Ed25519's by >= 2 kB."""
    m_mldsa = (_mean_bandwidth("mlkem512", "mldsa44", dnssec_on=True)
               - _mean_bandwidth("mlkem512", "mldsa44"))
    m_ed = (_mean_bandwidth("mlkem512", "ed25519", dnssec_on=True)
            - _mean_bandwidth("mlkem512", "ed25519"))
    report("DNSSEC marginal bandwidth", m_mldsa - m_ed >= 2.0,
           f"mldsa44 {m_mldsa:.2f} kB vs ed25519 {m_ed:.2f} kB")


def test_c07_phase_additivity():
    """Handshake and resolution phase sums match wall clock over 1,000
    trials each (5% or 200 microseconds)."""
    kem = make_suite("x25519", "ed25519").kem
    sig = make_suite("x25519", "ed25519").sig
    worst_hs = 0
    for _ in range(1000):
        client, server, _ = handshake_pair(kem, sig, BACKEND)
        client.timings.t_term = 0
        diff = abs(client.timings.total() - client.handshake_wall_ns)
        worst_hs = max(worst_hs, diff)
        assert diff <= max(0.05 * client.handshake_wall_ns, 200_000)
        client.conn.close()
        server.conn.close()
    tree = resolver.build_zone_tree(dnssec_alg=sig, backend=BACKEND)
    r = resolver.Resolver(tree, dnssec_enabled=True, backend=BACKEND)
    q = wire.build_query("www.example.test", wire.TYPE_A, True)
    worst_res = 0.0
    for _ in range(1000):
        start = time.perf_counter()
        _, trace = r.resolve(q)
        wall = time.perf_counter() - start
        diff = abs(perfmodel.phase2_total(trace, 1) - wall)
        worst_res = max(worst_res, diff)
        assert diff <= max(0.05 * wall, 200e-6)
    report("phase additivity over 1,000 trials each", True,
           f"worst handshake gap {worst_hs} ns, "
           f"worst resolution gap {worst_res * 1e6:.1f} us")


def test_c08_downgrade_fuzzing():
    """10,000 fuzzed offers never yield an accepted classical-only suite
    under the strict policies."""
    rng = random.Random(7)
    kems = all_algorithms(Kind.KEM)
    sigs = all_algorithms(Kind.SIGNATURE)
    accepted_classical = 0
    trials = 10_000
    for _ in range(trials):
        offer_kems = rng.sample(kems, rng.randint(1, 4))
        offer_sigs = rng.sample(sigs, rng.randint(1, 4))
        mode = rng.choice([PolicyMode.HYBRID_REQUIRED, PolicyMode.PQC_ONLY])
        result = enforce_negotiation(offer_kems, offer_sigs, mode)
        if result.accepted:
            cls = classify_profile(result.kem, result.sig)
            if cls == DeploymentClass.LEGACY_ONLY:
                accepted_classical += 1
            if mode == PolicyMode.PQC_ONLY and cls != DeploymentClass.PQC_ONLY:
                accepted_classical += 1
    report("downgrade fuzzing", accepted_classical == 0,
           f"{trials} offers, {accepted_classical} classical-only acceptances")


def test_c09_session_scaling():
    """Per-session bandwidth with 100 workers is within 15% of 100x the
    single-query bandwidth, and 1,000 workers all complete."""
    plan1 = bench.BenchPlan(make_suite("mlkem512", "mldsa44"), n=3)
    target = bench.launch_target(plan1, BACKEND)
    try:
        single = bench.run_benchmark(plan1, target, BACKEND).mean_bandwidth
        plan100 = bench.BenchPlan(make_suite("mlkem512", "mldsa44"),
                                  n=1, workers=100)
        session = bench.run_session(0, plan100, target, BACKEND)
        ratio = session.delta_b / (100 * single)
        plan1000 = bench.BenchPlan(make_suite("mlkem512", "mldsa44"),
                                   n=1, workers=1000)
        big = bench.run_session(1, plan1000, target, BACKEND)
    finally:
        target.close()
    report("session scaling", 0.85 <= ratio <= 1.15 and big.failures == 0,
           f"W=100 ratio {ratio:.3f}, W=1000 failures {big.failures}")


def test_c10_fragmentation_guard():
    """Oversized signed answers always carry the TC bit over plain UDP and
    pass untruncated over DoT."""
    sig = make_suite("mlkem512", "sphincssha2128f").sig
    kem = make_suite("mlkem512", "sphincssha2128f").kem
    tree = resolver.build_zone_tree(dnssec_alg=sig, backend=BACKEND)
    ca = channel.CertificateAuthority(sig, BACKEND)
    ident = channel.make_server_identity(sig, ca, BACKEND)
    ep = resolver.serve(resolver.EndpointConfig(
        tree, ident, [kem], [sig], dnssec_enabled=True, udp_port=0,
        backend=BACKEND))
    try:
        ok = True
        for payload in (512, 1232, 4096):
            q = wire.build_query("www.example.test", wire.TYPE_A, True,
                                 payload_size=payload)
            s = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            s.settimeout(5.0)
            s.sendto(wire.encode_message(q), ("127.0.0.1", ep.udp_port))
            data, _ = s.recvfrom(65535)
            s.close()
            resp = wire.decode_message(data)
            ok = ok and len(data) <= payload and resp.tc
        # The signed answer alone is ~17 kB here; over DoT it must arrive
        # whole, with all records intact.
        ccfg = channel.ClientConfig([kem], [sig], PolicyMode.ALLOW_LEGACY,
                                    {sig.name: ca.public_key}, BACKEND,
                                    timeout=10.0)
        client = resolver.ResolverClient("127.0.0.1", ep.port, ccfg)
        resp = client.query("www.example.test", want_dnssec=True)
        client.close()
        ok = ok and not resp.tc and any(
            rr.rtype == wire.TYPE_RRSIG for rr in resp.answers)
        assert fragmentation_guard(8900, TransportKind.UDP_PLAIN, 1232) == \
            TRUNCATE_AND_FLAG
        assert fragmentation_guard(8900, TransportKind.DOT, 1232) == PASS
    finally:
        ep.stop()
    report("fragmentation guard", ok,
           "UDP responses capped with TC bit, DoT untruncated")


def test_c11_normalization_formulas():
    """Pinned arithmetic for the CPU and memory normalizations."""
    cpu = bench.normalize_cpu_client(0.8, 0.0, 1.0, 16)
    mem = bench.memory_percent(11264, 7810.3)
    report("normalization formulas", cpu == 5.0 and 0.140 <= mem <= 0.142,
           f"cpu {cpu}, mem {mem:.4f}%")
