"""Composition model for resolution performance.

A full profile is the transport sample plus, when validation is on, the
DNSSEC marginal sample.  Latency and bandwidth add; CPU and memory are
peak-like, so the composed profile reports both the additive value and
the max, labeled.  Phase totals for the handshake and for multi-hop
resolution are plain sums over their recorded components.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

from .bench import PerfSample
from .channel import PhaseTimings
from .errors import SuiteMismatch
from .resolver import ResolutionTrace
from .suites import AlgorithmSuite


@dataclass
class ProfileResult:
    p_dns: PerfSample
    p_dns_max_cpu_mem: PerfSample
    delta_dnssec: int
    s_dnssec: PerfSample | None
    s_transport: PerfSample
    suite: AlgorithmSuite


def compose_profile(delta: int, s_dnssec: PerfSample | None,
                    s_transport: PerfSample, suite: AlgorithmSuite,
                    dnssec_suite: AlgorithmSuite | None = None) -> ProfileResult:
    """Componentwise weighted sum of the two samples.

    ``dnssec_suite`` names the suite the DNSSEC sample was measured
    under; when given it must match ``suite``.
    """
    if delta not in (0, 1):
        raise ValueError(f"delta must be 0 or 1, got {delta}")
    if dnssec_suite is not None and dnssec_suite != suite:
        raise SuiteMismatch(
            f"DNSSEC sample from {dnssec_suite.label()}, "
            f"transport sample from {suite.label()}")
    if delta and s_dnssec is None:
        raise ValueError("delta=1 requires a DNSSEC sample")
    d = s_dnssec if delta else None
    additive = PerfSample(
        t=s_transport.t,
        l=s_transport.l + (d.l if d else 0.0),
        b=s_transport.b + (d.b if d else 0.0),
        c_client=s_transport.c_client + (d.c_client if d else 0.0),
        c_server=s_transport.c_server + (d.c_server if d else 0.0),
        m_client=s_transport.m_client + (d.m_client if d else 0.0))
    peaky = PerfSample(
        t=additive.t, l=additive.l, b=additive.b,
        c_client=max(s_transport.c_client, d.c_client if d else 0.0),
        c_server=max(s_transport.c_server, d.c_server if d else 0.0),
        m_client=max(s_transport.m_client, d.m_client if d else 0.0))
    return ProfileResult(additive, peaky, delta, s_dnssec, s_transport, suite)


def phase1_total(t: PhaseTimings) -> int:
    """Handshake wall time as the sum of its seven phases, nanoseconds."""
    return t.total()


def phase2_total(trace: ResolutionTrace, delta: int) -> float:
    """Resolution wall time from a trace, seconds.

    Sum of per-hop query and response times, plus validation times when
    ``delta`` is 1, plus the final return step.
    """
    total = sum(s.t_query + s.t_response for s in trace.steps)
    if delta:
        total += sum(s.t_dnssec for s in trace.steps)
    return total + trace.t_return


@dataclass
class ModelGap:
    suite: AlgorithmSuite
    metric: str
    composed: float
    measured: float

    @property
    def gap_fraction(self) -> float:
        if self.measured == 0:
            return 0.0 if self.composed == 0 else float("inf")
        return abs(self.composed - self.measured) / self.measured


def model_gap_report(profile: ProfileResult,
                     measured: PerfSample) -> list[ModelGap]:
    """Composed-vs-measured gap per additive metric."""
    return [
        ModelGap(profile.suite, "latency", profile.p_dns.l, measured.l),
        ModelGap(profile.suite, "bandwidth", profile.p_dns.b, measured.b),
        ModelGap(profile.suite, "cpu_client", profile.p_dns.c_client,
                 measured.c_client),
        ModelGap(profile.suite, "cpu_server", profile.p_dns.c_server,
                 measured.c_server),
        ModelGap(profile.suite, "mem", profile.p_dns.m_client,
                 measured.m_client),
    ]


def append_model_gap(path: str, gaps: list[ModelGap]):
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(["kem", "ds", "metric", "composed", "measured",
                             "gap_fraction"])
        for g in gaps:
            writer.writerow([g.suite.kem.name, g.suite.sig.name, g.metric,
                             f"{g.composed:.4f}", f"{g.measured:.4f}",
                             f"{g.gap_fraction:.4f}"])
