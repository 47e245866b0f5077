"""Protocol-level mitigations in action.

Shows the downgrade guard rejecting a stripped offer, the rate limiter
throttling a handshake flood, and the fragmentation guard truncating an
oversized UDP answer.
"""

import socket

from pqcdns import channel, resolver, wire
from pqcdns.policy import (
    HANDSHAKE_COST,
    PolicyMode,
    RateLimiter,
    enforce_negotiation,
)
from pqcdns.suites import CryptoBackend, get_algorithm


def downgrade_demo():
    print("== negotiation policy ==")
    hybrid_offer = ([get_algorithm("x25519"), get_algorithm("mlkem512")],
                    [get_algorithm("ed25519"), get_algorithm("mldsa44")])
    stripped = ([get_algorithm("x25519")], [get_algorithm("ed25519")])
    for mode in PolicyMode:
        full = enforce_negotiation(*hybrid_offer, mode)
        strip = enforce_negotiation(*stripped, mode)
        full_s = f"{full.kem.name}+{full.sig.name}" if full.accepted else "reject"
        strip_s = (f"{strip.kem.name}+{strip.sig.name}" if strip.accepted
                   else f"reject ({strip.reason})")
        print(f"  {mode.value:<17} full offer -> {full_s:<20} "
              f"stripped offer -> {strip_s}")


def rate_limit_demo():
    print("\n== rate limiting ==")
    limiter = RateLimiter(capacity=12.0, refill_rate=2.0)
    allowed = throttled = 0
    for _ in range(10):
        ok, retry = limiter.check(("198.51.100.7", 40000), HANDSHAKE_COST)
        if ok:
            allowed += 1
        else:
            throttled += 1
    print(f"  10 instant handshakes, capacity 12, cost {HANDSHAKE_COST}: "
          f"{allowed} allowed, {throttled} throttled")


def fragmentation_demo():
    print("\n== fragmentation guard ==")
    backend = CryptoBackend("simulated", seed=3)
    sig = get_algorithm("sphincssha2128f")
    tree = resolver.build_zone_tree(dnssec_alg=sig, backend=backend)
    ca = channel.CertificateAuthority(sig, backend)
    ident = channel.make_server_identity(sig, ca, backend)
    ep = resolver.serve(resolver.EndpointConfig(
        tree, ident, [get_algorithm("mlkem512")], [sig],
        dnssec_enabled=True, udp_port=0, backend=backend))
    try:
        q = wire.build_query("www.example.test", wire.TYPE_A, True,
                             payload_size=1232)
        s = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        s.settimeout(5.0)
        s.sendto(wire.encode_message(q), ("127.0.0.1", ep.udp_port))
        data, _ = s.recvfrom(65535)
        s.close()
        resp = wire.decode_message(data)
        full = resolver.answer_from_store(tree.auth, q, True)
        print(f"  signed answer is {len(wire.encode_message(full))} B; "
              f"UDP reply is {len(data)} B with TC={resp.tc} "
              f"(advertised max 1232)")
    finally:
        ep.stop()


def main():
    downgrade_demo()
    rate_limit_demo()
    fragmentation_demo()


if __name__ == "__main__":
    main()
