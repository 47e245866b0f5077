import socket
import threading

import pytest

from pqcdns import channel, suites
from pqcdns.policy import PolicyMode


@pytest.fixture
def backend():
    return suites.CryptoBackend("simulated", seed=1234)


def handshake_pair(kem, sig, backend,
                   client_policy=PolicyMode.ALLOW_LEGACY,
                   server_policy=PolicyMode.ALLOW_LEGACY,
                   offered_kems=None, offered_sigs=None,
                   supported_kems=None, supported_sigs=None):
    """Run a full handshake over a socketpair; returns (client, server)
    sessions, or raises the client-side error."""
    ca = channel.CertificateAuthority(sig, backend)
    ident = channel.make_server_identity(sig, ca, backend)
    scfg = channel.ServerConfig(ident, supported_kems or [kem],
                                supported_sigs or [sig], server_policy,
                                backend, timeout=5.0)
    ccfg = channel.ClientConfig(offered_kems or [kem], offered_sigs or [sig],
                                client_policy, {sig.name: ca.public_key},
                                backend, timeout=5.0)
    a, b = socket.socketpair()
    result = {}

    def serve():
        try:
            result["server"] = channel.run_server_handshake(b, scfg)
        except Exception as exc:
            result["server_error"] = exc

    t = threading.Thread(target=serve)
    t.start()
    try:
        client = channel.run_client_handshake(a, ccfg)
    finally:
        t.join(timeout=5)
    if "server_error" in result and "server" not in result:
        pass  # client-side outcome is what the caller asserts on
    return client, result.get("server"), result.get("server_error")
