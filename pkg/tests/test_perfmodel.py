import random
import time

import pytest

from pqcdns import bench, perfmodel, resolver, wire
from pqcdns.bench import PerfSample
from pqcdns.channel import PhaseTimings
from pqcdns.errors import SuiteMismatch
from pqcdns.suites import get_algorithm, make_suite


def _sample(l=1.0, b=2.0, cc=0.5, cs=0.25, m=0.1):
    return PerfSample(t=0.0, l=l, b=b, c_client=cc, c_server=cs, m_client=m)


def test_compose_delta_zero_is_transport_exactly():
    suite = make_suite("mlkem512", "mldsa44")
    transport_sample = _sample()
    result = perfmodel.compose_profile(0, _sample(9, 9, 9, 9, 9),
                                       transport_sample, suite)
    assert result.p_dns == transport_sample


def test_compose_delta_one_adds_componentwise():
    suite = make_suite("mlkem512", "mldsa44")
    result = perfmodel.compose_profile(1, _sample(b=2.92), _sample(b=10.54),
                                       suite)
    assert abs(result.p_dns.b - 13.46) < 1e-9
    assert result.p_dns.l == 2.0
    # Peaks do not add; the max-composed view reports the larger component.
    assert result.p_dns_max_cpu_mem.c_client == 0.5
    assert result.p_dns_max_cpu_mem.b == result.p_dns.b


def test_compose_suite_mismatch():
    with pytest.raises(SuiteMismatch):
        perfmodel.compose_profile(1, _sample(), _sample(),
                                  make_suite("mlkem512", "mldsa44"),
                                  dnssec_suite=make_suite("mlkem512",
                                                          "falcon512"))


def test_compose_is_linear_in_each_component():
    suite = make_suite("x25519", "ed25519")
    a, b = _sample(l=3, b=5), _sample(l=7, b=11)
    combined = perfmodel.compose_profile(1, a, b, suite).p_dns
    doubled = perfmodel.compose_profile(
        1, _sample(l=6, b=10), b, suite).p_dns
    assert doubled.l - b.l == 2 * (combined.l - b.l)
    assert doubled.b - b.b == 2 * (combined.b - b.b)


def test_phase1_total_sum_and_commutativity():
    assert perfmodel.phase1_total(PhaseTimings()) == 0
    values = [3, 1, 4, 1, 5, 9, 2]
    t = PhaseTimings(*values)
    assert perfmodel.phase1_total(t) == sum(values)
    shuffled = values[:]
    random.Random(0).shuffle(shuffled)
    assert perfmodel.phase1_total(PhaseTimings(*shuffled)) == sum(values)


def test_phase2_total_structure():
    steps = [resolver.ResolutionStep("root", 1.0, 2.0, 10.0),
             resolver.ResolutionStep("tld", 3.0, 4.0, 20.0),
             resolver.ResolutionStep("authoritative", 5.0, 6.0, 30.0)]
    trace = resolver.ResolutionTrace(steps=steps, t_return=0.5)
    assert perfmodel.phase2_total(trace, 0) == 21.5
    assert perfmodel.phase2_total(trace, 1) == 81.5


def test_phase2_matches_trace_total(backend):
    tree = resolver.build_zone_tree(dnssec_alg=get_algorithm("ed25519"),
                                    backend=backend)
    r = resolver.Resolver(tree, dnssec_enabled=True, backend=backend)
    q = wire.build_query("www.example.test", wire.TYPE_A, True)
    _, trace = r.resolve(q)
    assert perfmodel.phase2_total(trace, 1) == pytest.approx(trace.total())


def test_model_gap_on_measured_data(backend):
    # Composed DNSSEC-marginal + transport sample vs a measured DNSSEC-on
    # run; latency gap must be small on loopback.
    suite = make_suite("mlkem512", "mldsa44")
    plan_off = bench.BenchPlan(suite, dnssec=False, n=5)
    plan_on = bench.BenchPlan(suite, dnssec=True, n=5)
    off = bench.run_benchmark(plan_off, backend=backend)
    on = bench.run_benchmark(plan_on, backend=backend)
    s_transport = off.samples[0].__class__(
        t=0, l=off.mean_latency, b=off.mean_bandwidth,
        c_client=off.mean_cpu_client, c_server=off.mean_cpu_server,
        m_client=off.mean_mem)
    marginal = PerfSample(
        t=0, l=on.mean_latency - off.mean_latency,
        b=on.mean_bandwidth - off.mean_bandwidth,
        c_client=0, c_server=0, m_client=0)
    profile = perfmodel.compose_profile(1, marginal, s_transport, suite)
    measured = PerfSample(t=0, l=on.mean_latency, b=on.mean_bandwidth,
                          c_client=on.mean_cpu_client,
                          c_server=on.mean_cpu_server, m_client=on.mean_mem)
    gaps = {g.metric: g for g in perfmodel.model_gap_report(profile, measured)}
    # The marginal is computed from the same paired runs, so bandwidth
    # composes exactly and latency within the loopback tolerance.
    assert gaps["bandwidth"].gap_fraction < 1e-9
    assert gaps["latency"].gap_fraction <= 0.20


def test_model_gap_csv(tmp_path):
    suite = make_suite("mlkem512", "mldsa44")
    gaps = [perfmodel.ModelGap(suite, "latency", 10.0, 11.0)]
    path = tmp_path / "gaps.csv"
    perfmodel.append_model_gap(str(path), gaps)
    rows = bench.read_csv_rows(str(path))
    assert rows[0]["metric"] == "latency"
    assert float(rows[0]["gap_fraction"]) == pytest.approx(1.0 / 11.0,
                                                           abs=1e-4)
