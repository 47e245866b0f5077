"""Signed three-level resolution walkthrough.

Builds a root / TLD / authoritative tree signed with a post-quantum zone
key, resolves a name with per-hop validation, shows the timing trace,
then tampers with the TLD's DS signature to demonstrate the ServFail.
"""

import dataclasses

from pqcdns import dnssec, resolver, wire
from pqcdns.suites import CryptoBackend, get_algorithm


def show_trace(trace):
    for step in trace.steps:
        print(f"  {step.role:<14} query {step.t_query*1e6:7.1f} us  "
              f"response {step.t_response*1e6:7.1f} us  "
              f"validate {step.t_dnssec*1e6:7.1f} us")
    print(f"  return {trace.t_return*1e6:.1f} us, outcome: {trace.outcome}")


def main():
    backend = CryptoBackend("simulated", seed=5)
    alg = get_algorithm("mldsa44")
    tree = resolver.build_zone_tree(dnssec_alg=alg, backend=backend)
    r = resolver.Resolver(tree, dnssec_enabled=True,
                          cache=resolver.ResponseCache(), backend=backend)
    q = wire.build_query("www.example.test", wire.TYPE_A, want_dnssec=True)

    print(f"zone signing algorithm: {alg.name} "
          f"(DNSKEY alg {dnssec.dnssec_algorithm_number(alg)})")
    resp, trace = r.resolve(q)
    print(f"\nfirst resolution: rcode={resp.rcode} ad={resp.ad}")
    show_trace(trace)

    resp, trace = r.resolve(q)
    print(f"\nsecond resolution (cache): n={trace.n} "
          f"from_cache={trace.from_cache}")

    key = (tree.auth.zone, wire.TYPE_DS)
    sig = tree.tld.rrsigs[key]
    tree.tld.rrsigs[key] = dataclasses.replace(
        sig, rdata=sig.rdata[:-1] + bytes([sig.rdata[-1] ^ 1]))
    fresh = resolver.Resolver(tree, dnssec_enabled=True, backend=backend)
    resp, trace = fresh.resolve(q)
    print(f"\nafter tampering with the TLD DS signature: "
          f"rcode={resp.rcode} (ServFail), outcome={trace.outcome}")


if __name__ == "__main__":
    main()
