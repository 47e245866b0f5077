"""Protocol-level mitigations: negotiation policy, rate limiting,
fragmentation guard."""

from __future__ import annotations

import enum
import threading
import time
from dataclasses import dataclass, field

from .suites import AlgorithmId, DeploymentClass, classify_profile
from .transport import MAX_DNS_MESSAGE, TransportKind


class PolicyMode(enum.Enum):
    ALLOW_LEGACY = "allow-legacy"
    HYBRID_PREFERRED = "hybrid-preferred"
    HYBRID_REQUIRED = "hybrid-required"
    PQC_ONLY = "pqc-only"

    @property
    def strictness(self) -> int:
        return [PolicyMode.ALLOW_LEGACY, PolicyMode.HYBRID_PREFERRED,
                PolicyMode.HYBRID_REQUIRED, PolicyMode.PQC_ONLY].index(self)


REJECT_CLASSICAL_ONLY = "classical-only-offer"
REJECT_NO_COMMON = "no-common-suite"


@dataclass(frozen=True)
class NegotiationResult:
    accepted: bool
    kem: AlgorithmId | None = None
    sig: AlgorithmId | None = None
    reason: str | None = None


def _suite_allowed(kem: AlgorithmId, sig: AlgorithmId, mode: PolicyMode) -> bool:
    cls = classify_profile(kem, sig)
    if mode == PolicyMode.PQC_ONLY:
        return cls == DeploymentClass.PQC_ONLY
    if mode == PolicyMode.HYBRID_REQUIRED:
        return cls != DeploymentClass.LEGACY_ONLY
    return True


def _rank(kem: AlgorithmId, sig: AlgorithmId) -> int:
    # Strength ranking used by the lenient modes: quantum-resistant
    # components win over classical-only ones.
    cls = classify_profile(kem, sig)
    return {DeploymentClass.HYBRID_DUAL: 0,
            DeploymentClass.PQC_ONLY: 0,
            DeploymentClass.HYBRID_KEM_LEGACY_SIG: 1,
            DeploymentClass.HYBRID_LEGACY_KEM_PQC_SIG: 1,
            DeploymentClass.LEGACY_ONLY: 2}[cls]


def enforce_negotiation(offered_kems: list[AlgorithmId],
                        offered_sigs: list[AlgorithmId],
                        mode: PolicyMode,
                        supported_kems: list[AlgorithmId] | None = None,
                        supported_sigs: list[AlgorithmId] | None = None) -> NegotiationResult:
    """Deterministic suite selection under a negotiation policy.

    Rejection is a value, not an exception; reasons are
    ``classical-only-offer`` and ``no-common-suite``.
    """
    kems = [k for k in offered_kems
            if supported_kems is None or k in supported_kems]
    sigs = [s for s in offered_sigs
            if supported_sigs is None or s in supported_sigs]
    candidates = [(k, s) for k in kems for s in sigs]
    if not candidates:
        return NegotiationResult(False, reason=REJECT_NO_COMMON)
    allowed = [(k, s) for k, s in candidates if _suite_allowed(k, s, mode)]
    if not allowed:
        # Everything mutually supported was classical-only.
        return NegotiationResult(False, reason=REJECT_CLASSICAL_ONLY)
    # Stable sort: class strength first, then client preference order.
    best = min(allowed, key=lambda ks: (_rank(*ks),
                                        kems.index(ks[0]), sigs.index(ks[1])))
    return NegotiationResult(True, kem=best[0], sig=best[1])


# --------------------------------------------------------------------------
# Rate limiting


@dataclass
class _Bucket:
    tokens: float
    last_refill: float


class RateLimiter:
    """Token bucket per client identity; internally synchronized."""

    def __init__(self, capacity: float, refill_rate: float,
                 clock=time.monotonic):
        if capacity <= 0 or refill_rate < 0:
            raise ValueError("capacity must be > 0 and refill rate >= 0")
        self.capacity = capacity
        self.refill_rate = refill_rate
        self._clock = clock
        self._lock = threading.Lock()
        self._buckets: dict[object, _Bucket] = {}

    def check(self, client, cost: float = 1.0) -> tuple[bool, float]:
        """Returns (allowed, retry_after_seconds)."""
        if cost <= 0:
            raise ValueError("cost must be > 0")
        now = self._clock()
        with self._lock:
            bucket = self._buckets.get(client)
            if bucket is None:
                bucket = _Bucket(tokens=self.capacity, last_refill=now)
                self._buckets[client] = bucket
            elapsed = max(0.0, now - bucket.last_refill)
            bucket.tokens = min(self.capacity,
                                bucket.tokens + elapsed * self.refill_rate)
            bucket.last_refill = now
            if bucket.tokens >= cost:
                bucket.tokens -= cost
                return True, 0.0
            deficit = cost - bucket.tokens
            retry_after = (deficit / self.refill_rate
                           if self.refill_rate > 0 else float("inf"))
            return False, retry_after


# Handshakes are the expensive unit under PQC load; queries are cheap.
HANDSHAKE_COST = 4.0
QUERY_COST = 1.0


def rate_limit_check(limiter: RateLimiter, client, cost: float) -> tuple[bool, float]:
    return limiter.check(client, cost)


# --------------------------------------------------------------------------
# Fragmentation guard

PASS = "pass"
TRUNCATE_AND_FLAG = "truncate-and-flag"
REJECT = "reject"


def fragmentation_guard(message_bytes: int, transport: TransportKind,
                        advertised_max: int) -> str:
    if message_bytes > MAX_DNS_MESSAGE:
        return REJECT
    if transport == TransportKind.UDP_PLAIN and message_bytes > advertised_max:
        return TRUNCATE_AND_FLAG
    return PASS
