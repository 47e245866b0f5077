"""Tour of the secure channel across deployment classes.

Runs one handshake per representative suite over a socketpair, prints the
negotiated parameters, the exact bytes on the wire, and the phase timing
breakdown.
"""

import socket
import threading

from pqcdns import channel
from pqcdns.policy import PolicyMode
from pqcdns.suites import CryptoBackend, make_suite

SUITES = [
    ("x25519", "ed25519", "legacy only"),
    ("mlkem512", "mldsa44", "post-quantum only"),
    ("mlkem512", "ed25519", "pq kem, legacy signature"),
    ("x25519mlkem512", "mldsa44", "hybrid kem"),
    ("mlkem512", "sphincssha2128f", "hash-based signature"),
]


def run_one(kem_name, sig_name, note, backend):
    suite = make_suite(kem_name, sig_name)
    ca = channel.CertificateAuthority(suite.sig, backend)
    ident = channel.make_server_identity(suite.sig, ca, backend)
    scfg = channel.ServerConfig(ident, [suite.kem], [suite.sig],
                                backend=backend)
    ccfg = channel.ClientConfig([suite.kem], [suite.sig],
                                PolicyMode.ALLOW_LEGACY,
                                {suite.sig.name: ca.public_key}, backend)
    a, b = socket.socketpair()
    box = {}
    t = threading.Thread(
        target=lambda: box.update(s=channel.run_server_handshake(b, scfg)))
    t.start()
    client = channel.run_client_handshake(a, ccfg)
    t.join()
    server = box["s"]

    assert client.keys == server.keys
    expected = channel.expected_handshake_bytes(suite)
    print(f"\n{suite.label()}  [{note}]")
    print(f"  deployment class: {suite.deployment_class.name}, "
          f"security level {suite.security_level}")
    print(f"  wire bytes: {client.conn.total_bytes} "
          f"(predicted {expected}, "
          f"{'exact' if client.conn.total_bytes == expected else 'off'})")
    for name, size in client.transcript.bytes_on_wire.items():
        print(f"    {name:<20} {size:>6} B")
    tm = client.timings
    print(f"  phases us: ch={tm.t_ch/1000:.0f} sh={tm.t_sh/1000:.0f} "
          f"kem={tm.t_kem/1000:.0f} sig={tm.t_sig/1000:.0f} "
          f"kdf={tm.t_kdf/1000:.0f} fin={tm.t_fin/1000:.0f}")
    threading.Thread(target=server.close).start()
    client.close()


def main():
    backend = CryptoBackend("simulated", seed=1)
    for kem, sig, note in SUITES:
        run_one(kem, sig, note, backend)


if __name__ == "__main__":
    main()
