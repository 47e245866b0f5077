"""TLS-1.3-shaped secure channel parameterized by an algorithm suite.

The handshake has the phase structure of TLS 1.3 (one round trip, server
auth only) but uses a self-describing record framing, so byte accounting
is exact: every variable-length crypto artifact travels behind a 2-byte
length prefix and algorithms are identified by fixed 2-byte registry
codes.  ``expected_handshake_bytes`` reproduces the wire total from the
registry sizes alone.

Client-side phase timings follow the seven-term handshake decomposition:
hello out, server flight in, decapsulation, signature verification, key
derivation, finished exchange, and termination at close.
"""

from __future__ import annotations

import hashlib
import hmac
import socket
import struct
import threading
import time
from dataclasses import dataclass, field

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import (
    AuthFailure,
    DowngradeRejected,
    EmptyOffer,
    HandshakeTimeout,
    KemFailure,
    MalformedCiphertext,
    MalformedKey,
    NoCommonSuite,
    ReplayDetected,
    SignatureInvalid,
)
from .policy import (
    NegotiationResult,
    PolicyMode,
    REJECT_CLASSICAL_ONLY,
    REJECT_NO_COMMON,
    enforce_negotiation,
)
from .suites import (
    AlgorithmId,
    AlgorithmSuite,
    CryptoBackend,
    DEFAULT_BACKEND,
    algorithm_by_code,
    algorithm_params,
)

REC_CLIENT_HELLO = 1
REC_SERVER_HELLO = 2
REC_CERTIFICATE = 3
REC_CERT_VERIFY = 4
REC_FINISHED_SERVER = 5
REC_FINISHED_CLIENT = 6
REC_APP_DATA = 7
REC_CLOSE = 8
REC_ALERT = 9

RECORD_HEADER = 5  # type:1 + length:4
FINISHED_BYTES = 32
RANDOM_BYTES = 32

SERVER_SUBJECT = "dns.test"
ISSUER_NAME = "ca.test"

AEAD_NAME = "aes128gcm"
_AEAD_KEY_BYTES = 16
_AEAD_NONCE_BYTES = 12
_AEAD_TAG_BYTES = 16

# Wire cost of one protected application record beyond its plaintext:
# record header + explicit sequence number + AEAD tag.
APP_RECORD_OVERHEAD = RECORD_HEADER + 8 + _AEAD_TAG_BYTES

# Wire cost of an orderly close (one empty CLOSE record each way).
CLOSE_BYTES = 2 * RECORD_HEADER

_POLICY_CODES = {m: i for i, m in enumerate(PolicyMode)}
_POLICY_BY_CODE = {i: m for m, i in _POLICY_CODES.items()}


def _hkdf_extract(salt: bytes, ikm: bytes) -> bytes:
    return hmac.new(salt, ikm, hashlib.sha256).digest()


def _hkdf_expand(prk: bytes, info: bytes, n: int) -> bytes:
    out, block, counter = b"", b"", 1
    while len(out) < n:
        block = hmac.new(prk, block + info + bytes([counter]), hashlib.sha256).digest()
        out += block
        counter += 1
    return out[:n]


# --------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class Certificate:
    subject: str
    sig_alg: AlgorithmId
    public_key: bytes
    issuer: str
    issuer_signature: bytes

    def body(self) -> bytes:
        subj = self.subject.encode()
        return (struct.pack(">H", len(subj)) + subj
                + struct.pack(">H", self.sig_alg.code)
                + struct.pack(">H", len(self.public_key)) + self.public_key)

    def pack(self) -> bytes:
        issuer = self.issuer.encode()
        return (self.body()
                + struct.pack(">H", len(issuer)) + issuer
                + struct.pack(">H", len(self.issuer_signature)) + self.issuer_signature)

    @classmethod
    def unpack(cls, buf: bytes) -> "Certificate":
        pos = 0

        def take(n):
            nonlocal pos
            if pos + n > len(buf):
                raise SignatureInvalid("truncated certificate")
            out = buf[pos:pos + n]
            pos += n
            return out

        subj = take(struct.unpack(">H", take(2))[0]).decode()
        alg = algorithm_by_code(struct.unpack(">H", take(2))[0])
        pk = take(struct.unpack(">H", take(2))[0])
        issuer = take(struct.unpack(">H", take(2))[0]).decode()
        sig = take(struct.unpack(">H", take(2))[0])
        return cls(subj, alg, pk, issuer, sig)


class CertificateAuthority:
    """Single-level issuer using the same signature algorithm as its leaves."""

    def __init__(self, sig_alg: AlgorithmId, backend: CryptoBackend = DEFAULT_BACKEND,
                 name: str = ISSUER_NAME):
        self.sig_alg = sig_alg
        self.name = name
        self.backend = backend
        self.public_key, self._secret_key = backend.sig_keygen(sig_alg)

    def issue(self, subject: str, subject_public_key: bytes) -> Certificate:
        body = Certificate(subject, self.sig_alg, subject_public_key,
                           self.name, b"").body()
        sig = self.backend.sign(self.sig_alg, self._secret_key, b"cert" + body)
        return Certificate(subject, self.sig_alg, subject_public_key,
                           self.name, sig)


def verify_certificate(cert: Certificate, ca_public_key: bytes,
                       backend: CryptoBackend) -> bool:
    return backend.verify(cert.sig_alg, ca_public_key, b"cert" + cert.body(),
                          cert.issuer_signature)


@dataclass
class ServerIdentity:
    certificate: Certificate
    secret_key: bytes


def make_server_identity(sig_alg: AlgorithmId, ca: CertificateAuthority,
                         backend: CryptoBackend = DEFAULT_BACKEND,
                         subject: str = SERVER_SUBJECT) -> ServerIdentity:
    pk, sk = backend.sig_keygen(sig_alg)
    return ServerIdentity(ca.issue(subject, pk), sk)


# --------------------------------------------------------------------------
# Handshake state


@dataclass
class PhaseTimings:
    """Seven-term handshake decomposition, nanoseconds."""
    t_ch: int = 0
    t_sh: int = 0
    t_kem: int = 0
    t_sig: int = 0
    t_kdf: int = 0
    t_fin: int = 0
    t_term: int = 0

    def total(self) -> int:
        return (self.t_ch + self.t_sh + self.t_kem + self.t_sig
                + self.t_kdf + self.t_fin + self.t_term)


@dataclass
class SessionKeys:
    client_key: bytes
    client_nonce: bytes
    server_key: bytes
    server_nonce: bytes

    def __eq__(self, other):
        return (isinstance(other, SessionKeys)
                and self.client_key == other.client_key
                and self.client_nonce == other.client_nonce
                and self.server_key == other.server_key
                and self.server_nonce == other.server_nonce)


@dataclass
class HandshakeTranscript:
    negotiated: AlgorithmSuite | None = None
    messages: dict[str, bytes] = field(default_factory=dict)
    bytes_on_wire: dict[str, int] = field(default_factory=dict)

    def record(self, name: str, record_bytes: bytes):
        self.messages[name] = record_bytes
        self.bytes_on_wire[name] = len(record_bytes)

    def total_bytes(self) -> int:
        return sum(self.bytes_on_wire.values())


@dataclass
class ClientConfig:
    offered_kems: list[AlgorithmId]
    offered_sigs: list[AlgorithmId]
    policy_mode: PolicyMode = PolicyMode.ALLOW_LEGACY
    ca_public_keys: dict[str, bytes] = field(default_factory=dict)
    backend: CryptoBackend = DEFAULT_BACKEND
    timeout: float | None = 10.0


@dataclass
class ServerConfig:
    identity: ServerIdentity
    supported_kems: list[AlgorithmId]
    supported_sigs: list[AlgorithmId]
    policy_mode: PolicyMode = PolicyMode.ALLOW_LEGACY
    backend: CryptoBackend = DEFAULT_BACKEND
    timeout: float | None = 10.0


class Conn:
    """Socket wrapper with length-framed records and byte counters."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        try:
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        except OSError:
            pass  # socketpair and non-TCP sockets
        self._lock = threading.Lock()
        self.bytes_sent = 0
        self.bytes_received = 0
        self._buffer = b""

    def write_record(self, rtype: int, payload: bytes) -> bytes:
        rec = struct.pack(">BI", rtype, len(payload)) + payload
        try:
            self.sock.sendall(rec)
        except socket.timeout as exc:
            raise HandshakeTimeout(str(exc)) from exc
        with self._lock:
            self.bytes_sent += len(rec)
        return rec

    def _recv_exact(self, n: int) -> bytes:
        while len(self._buffer) < n:
            try:
                chunk = self.sock.recv(65536)
            except socket.timeout as exc:
                raise HandshakeTimeout(str(exc)) from exc
            if not chunk:
                raise ConnectionError("peer closed the connection")
            self._buffer += chunk
            with self._lock:
                self.bytes_received += len(chunk)
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out

    def read_record(self) -> tuple[int, bytes, bytes]:
        header = self._recv_exact(RECORD_HEADER)
        rtype, length = struct.unpack(">BI", header)
        payload = self._recv_exact(length)
        return rtype, payload, header + payload

    @property
    def total_bytes(self) -> int:
        with self._lock:
            return self.bytes_sent + self.bytes_received

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass


# --------------------------------------------------------------------------
# Hello construction / parameter selection


def build_client_hello(offered_kems: list[AlgorithmId],
                       offered_sigs: list[AlgorithmId],
                       policy_mode: PolicyMode,
                       key_share: bytes,
                       random_bytes: bytes) -> bytes:
    if not offered_kems or not offered_sigs:
        raise EmptyOffer("client hello requires at least one KEM and one signature offer")
    out = bytes([_POLICY_CODES[policy_mode]]) + random_bytes
    out += bytes([len(offered_kems)])
    for k in offered_kems:
        out += struct.pack(">H", k.code)
    out += bytes([len(offered_sigs)])
    for s in offered_sigs:
        out += struct.pack(">H", s.code)
    out += struct.pack(">H", len(key_share)) + key_share
    return out


@dataclass(frozen=True)
class ClientHello:
    policy_mode: PolicyMode
    random: bytes
    offered_kems: tuple[AlgorithmId, ...]
    offered_sigs: tuple[AlgorithmId, ...]
    key_share: bytes


def parse_client_hello(payload: bytes) -> ClientHello:
    pos = 0

    def take(n):
        nonlocal pos
        if pos + n > len(payload):
            raise EmptyOffer("truncated client hello")
        out = payload[pos:pos + n]
        pos += n
        return out

    mode = _POLICY_BY_CODE[take(1)[0]]
    rnd = take(RANDOM_BYTES)
    kems = tuple(algorithm_by_code(struct.unpack(">H", take(2))[0])
                 for _ in range(take(1)[0]))
    sigs = tuple(algorithm_by_code(struct.unpack(">H", take(2))[0])
                 for _ in range(take(1)[0]))
    share = take(struct.unpack(">H", take(2))[0])
    if not kems or not sigs:
        raise EmptyOffer("empty offer list in client hello")
    return ClientHello(mode, rnd, kems, sigs, share)


def select_parameters(hello: ClientHello, cfg: ServerConfig) -> AlgorithmSuite:
    result: NegotiationResult = enforce_negotiation(
        list(hello.offered_kems), list(hello.offered_sigs), cfg.policy_mode,
        cfg.supported_kems, cfg.supported_sigs)
    if not result.accepted:
        if result.reason == REJECT_CLASSICAL_ONLY:
            raise DowngradeRejected("classical-only offer rejected by policy")
        raise NoCommonSuite("no mutually supported suite")
    return AlgorithmSuite(result.kem, result.sig)


# --------------------------------------------------------------------------
# Key schedule


def _derive_keys(master: bytes, transcript_hash: bytes) -> SessionKeys:
    return SessionKeys(
        client_key=_hkdf_expand(master, b"c ap key" + transcript_hash, _AEAD_KEY_BYTES),
        client_nonce=_hkdf_expand(master, b"c ap iv" + transcript_hash, _AEAD_NONCE_BYTES),
        server_key=_hkdf_expand(master, b"s ap key" + transcript_hash, _AEAD_KEY_BYTES),
        server_nonce=_hkdf_expand(master, b"s ap iv" + transcript_hash, _AEAD_NONCE_BYTES))


def _finished_mac(master: bytes, label: bytes, transcript_hash: bytes) -> bytes:
    key = _hkdf_expand(master, label, 32)
    return hmac.new(key, transcript_hash, hashlib.sha256).digest()


# --------------------------------------------------------------------------
# Session


class Session:
    """An established channel endpoint with record protection."""

    def __init__(self, role: str, conn: Conn, keys: SessionKeys,
                 suite: AlgorithmSuite, transcript: HandshakeTranscript,
                 timings: PhaseTimings):
        self.role = role
        self.conn = conn
        self.keys = keys
        self.suite = suite
        self.transcript = transcript
        self.timings = timings
        self._send_seq = 0
        self._recv_seq = -1
        self.closed = False
        self.reset = False
        # Wall-clock accounting for the additivity check: sum of the
        # handshake span and the termination span.
        self.handshake_wall_ns = 0
        if role == "client":
            self._send_key, self._send_nonce = keys.client_key, keys.client_nonce
            self._recv_key, self._recv_nonce = keys.server_key, keys.server_nonce
        else:
            self._send_key, self._send_nonce = keys.server_key, keys.server_nonce
            self._recv_key, self._recv_nonce = keys.client_key, keys.client_nonce
        self._send_aead = AESGCM(self._send_key)
        self._recv_aead = AESGCM(self._recv_key)

    @staticmethod
    def _nonce_for(base: bytes, seq: int) -> bytes:
        mask = seq.to_bytes(len(base), "big")
        return bytes(a ^ b for a, b in zip(base, mask))

    def send_app(self, payload: bytes):
        seq = self._send_seq
        self._send_seq += 1
        ct = self._send_aead.encrypt(self._nonce_for(self._send_nonce, seq),
                                     payload, b"app" + struct.pack(">Q", seq))
        self.conn.write_record(REC_APP_DATA, struct.pack(">Q", seq) + ct)

    def recv_app(self) -> bytes:
        rtype, payload, _ = self.conn.read_record()
        if rtype == REC_CLOSE:
            raise ConnectionError("peer closed the session")
        if rtype != REC_APP_DATA:
            raise AuthFailure(f"unexpected record type {rtype}")
        return self.unprotect(payload)

    def unprotect(self, record_payload: bytes) -> bytes:
        if len(record_payload) < 8:
            raise AuthFailure("short protected record")
        seq = struct.unpack(">Q", record_payload[:8])[0]
        if seq <= self._recv_seq:
            raise ReplayDetected(f"sequence {seq} already seen")
        try:
            out = self._recv_aead.decrypt(
                self._nonce_for(self._recv_nonce, seq), record_payload[8:],
                b"app" + struct.pack(">Q", seq))
        except InvalidTag as exc:
            raise AuthFailure("record authentication failed") from exc
        self._recv_seq = seq
        return out

    def close(self) -> int:
        """Orderly close; returns t_term in ns. Idempotent."""
        if self.closed:
            return self.timings.t_term
        start = time.perf_counter_ns()
        try:
            self.conn.write_record(REC_CLOSE, b"")
            if self.role == "client":
                rtype, _, _ = self.conn.read_record()
                if rtype != REC_CLOSE:
                    self.reset = True
        except (ConnectionError, OSError, HandshakeTimeout):
            self.reset = True
        term = time.perf_counter_ns() - start
        self.timings.t_term = term
        self.handshake_wall_ns += term
        self.closed = True
        self.conn.close()
        return term


def protect_record(session: Session, plaintext: bytes) -> bytes:
    seq = session._send_seq
    session._send_seq += 1
    ct = session._send_aead.encrypt(
        Session._nonce_for(session._send_nonce, seq), plaintext,
        b"app" + struct.pack(">Q", seq))
    return struct.pack(">Q", seq) + ct


def unprotect_record(session: Session, record_payload: bytes) -> bytes:
    return session.unprotect(record_payload)


def close_session(session: Session) -> int:
    return session.close()


# --------------------------------------------------------------------------
# Handshake drivers


def run_client_handshake(sock: socket.socket, cfg: ClientConfig) -> Session:
    if not cfg.offered_kems or not cfg.offered_sigs:
        raise EmptyOffer("client config offers nothing")
    sock.settimeout(cfg.timeout)
    conn = Conn(sock)
    transcript = HandshakeTranscript()
    timings = PhaseTimings()
    backend = cfg.backend

    t0 = time.perf_counter_ns()
    kem = cfg.offered_kems[0]
    pk, sk = backend.kem_keygen(kem)
    hello = build_client_hello(cfg.offered_kems, cfg.offered_sigs,
                               cfg.policy_mode, pk, backend._random(RANDOM_BYTES))
    ch_rec = conn.write_record(REC_CLIENT_HELLO, hello)
    transcript.record("client_hello", ch_rec)
    t1 = time.perf_counter_ns()

    # Server flight: SH, Certificate, CertificateVerify, Finished.
    records = {}
    raw = {REC_CLIENT_HELLO: ch_rec}
    for expect in (REC_SERVER_HELLO, REC_CERTIFICATE, REC_CERT_VERIFY,
                   REC_FINISHED_SERVER):
        rtype, payload, rec = conn.read_record()
        if rtype == REC_ALERT:
            reason = payload.decode("utf-8", errors="replace")
            if "downgrade" in reason:
                raise DowngradeRejected(reason)
            if "no-common" in reason:
                raise NoCommonSuite(reason)
            raise SignatureInvalid(reason)
        if rtype != expect:
            raise SignatureInvalid(f"unexpected record {rtype}, wanted {expect}")
        records[rtype] = payload
        raw[rtype] = rec
    transcript.record("server_hello", raw[REC_SERVER_HELLO])
    transcript.record("certificate", raw[REC_CERTIFICATE])
    transcript.record("certificate_verify", raw[REC_CERT_VERIFY])
    transcript.record("finished_server", raw[REC_FINISHED_SERVER])
    t2 = time.perf_counter_ns()

    sh = records[REC_SERVER_HELLO]
    sel_kem = algorithm_by_code(struct.unpack(">H", sh[32:34])[0])
    sel_sig = algorithm_by_code(struct.unpack(">H", sh[34:36])[0])
    ct_len = struct.unpack(">H", sh[36:38])[0]
    ct = sh[38:38 + ct_len]
    suite = AlgorithmSuite(sel_kem, sel_sig)
    transcript.negotiated = suite
    # Hybrid binding: the client re-checks its own policy on the selection.
    probe = enforce_negotiation([sel_kem], [sel_sig], cfg.policy_mode)
    if not probe.accepted:
        raise DowngradeRejected(
            f"server selected {suite.label()} against client policy "
            f"{cfg.policy_mode.value}")
    if sel_kem != kem:
        raise KemFailure(f"server selected unoffered-share KEM {sel_kem.name}")

    try:
        shared_secret = backend.kem_decapsulate(kem, sk, ct)
    except (MalformedKey, MalformedCiphertext) as exc:
        raise KemFailure(str(exc)) from exc
    t3 = time.perf_counter_ns()

    cert = Certificate.unpack(records[REC_CERTIFICATE])
    ca_pk = cfg.ca_public_keys.get(cert.sig_alg.name)
    if ca_pk is None or not verify_certificate(cert, ca_pk, backend):
        raise SignatureInvalid("server certificate not signed by a trusted authority")
    if cert.sig_alg != sel_sig:
        raise SignatureInvalid("certificate algorithm does not match selection")
    th_cert = hashlib.sha256(raw[REC_CLIENT_HELLO] + raw[REC_SERVER_HELLO]
                             + raw[REC_CERTIFICATE]).digest()
    cv = records[REC_CERT_VERIFY]
    sig_len = struct.unpack(">H", cv[:2])[0]
    signature = cv[2:2 + sig_len]
    if not backend.verify(sel_sig, cert.public_key, b"cv" + th_cert, signature):
        raise SignatureInvalid("certificate verify signature invalid")
    t4 = time.perf_counter_ns()

    master = _hkdf_extract(b"pqcdns tls", shared_secret)
    th_cv = hashlib.sha256(raw[REC_CLIENT_HELLO] + raw[REC_SERVER_HELLO]
                           + raw[REC_CERTIFICATE] + raw[REC_CERT_VERIFY]).digest()
    keys = _derive_keys(master, th_cv)
    t5 = time.perf_counter_ns()

    expected_fin = _finished_mac(master, b"s fin", th_cv)
    if not hmac.compare_digest(records[REC_FINISHED_SERVER], expected_fin):
        raise SignatureInvalid("server finished MAC invalid")
    th_fin = hashlib.sha256(th_cv + raw[REC_FINISHED_SERVER]).digest()
    fin_c = _finished_mac(master, b"c fin", th_fin)
    fin_rec = conn.write_record(REC_FINISHED_CLIENT, fin_c)
    transcript.record("finished_client", fin_rec)
    t6 = time.perf_counter_ns()

    timings.t_ch = t1 - t0
    timings.t_sh = t2 - t1
    timings.t_kem = t3 - t2
    timings.t_sig = t4 - t3
    timings.t_kdf = t5 - t4
    timings.t_fin = t6 - t5
    session = Session("client", conn, keys, suite, transcript, timings)
    session.handshake_wall_ns = t6 - t0
    return session


def run_server_handshake(sock: socket.socket, cfg: ServerConfig) -> Session:
    sock.settimeout(cfg.timeout)
    conn = Conn(sock)
    transcript = HandshakeTranscript()
    timings = PhaseTimings()
    backend = cfg.backend

    t0 = time.perf_counter_ns()
    rtype, payload, ch_rec = conn.read_record()
    if rtype != REC_CLIENT_HELLO:
        raise SignatureInvalid(f"expected client hello, got record {rtype}")
    hello = parse_client_hello(payload)
    transcript.record("client_hello", ch_rec)

    try:
        suite = select_parameters(hello, cfg)
    except DowngradeRejected:
        conn.write_record(REC_ALERT, b"downgrade-rejected")
        raise
    except NoCommonSuite:
        conn.write_record(REC_ALERT, b"no-common-suite")
        raise
    transcript.negotiated = suite

    t_kem0 = time.perf_counter_ns()
    try:
        ct, shared_secret = backend.kem_encapsulate(suite.kem, hello.key_share)
    except (MalformedKey, MalformedCiphertext) as exc:
        conn.write_record(REC_ALERT, b"kem-failure")
        raise KemFailure(str(exc)) from exc
    timings.t_kem = time.perf_counter_ns() - t_kem0

    sh = (backend._random(RANDOM_BYTES)
          + struct.pack(">H", suite.kem.code) + struct.pack(">H", suite.sig.code)
          + struct.pack(">H", len(ct)) + ct)
    sh_rec = conn.write_record(REC_SERVER_HELLO, sh)
    transcript.record("server_hello", sh_rec)

    cert_rec = conn.write_record(REC_CERTIFICATE, cfg.identity.certificate.pack())
    transcript.record("certificate", cert_rec)

    t_sig0 = time.perf_counter_ns()
    th_cert = hashlib.sha256(ch_rec + sh_rec + cert_rec).digest()
    signature = backend.sign(suite.sig, cfg.identity.secret_key, b"cv" + th_cert)
    timings.t_sig = time.perf_counter_ns() - t_sig0
    cv = struct.pack(">H", len(signature)) + signature
    cv_rec = conn.write_record(REC_CERT_VERIFY, cv)
    transcript.record("certificate_verify", cv_rec)

    t_kdf0 = time.perf_counter_ns()
    master = _hkdf_extract(b"pqcdns tls", shared_secret)
    th_cv = hashlib.sha256(ch_rec + sh_rec + cert_rec + cv_rec).digest()
    keys = _derive_keys(master, th_cv)
    timings.t_kdf = time.perf_counter_ns() - t_kdf0

    fin_s = _finished_mac(master, b"s fin", th_cv)
    fin_s_rec = conn.write_record(REC_FINISHED_SERVER, fin_s)
    transcript.record("finished_server", fin_s_rec)

    rtype, fin_c, fin_c_rec = conn.read_record()
    if rtype != REC_FINISHED_CLIENT:
        raise SignatureInvalid(f"expected client finished, got record {rtype}")
    th_fin = hashlib.sha256(th_cv + fin_s_rec).digest()
    if not hmac.compare_digest(fin_c, _finished_mac(master, b"c fin", th_fin)):
        raise SignatureInvalid("client finished MAC invalid")
    transcript.record("finished_client", fin_c_rec)

    timings.t_ch = 0  # client-side phases; the server records only its own work
    session = Session("server", conn, keys, suite, transcript, timings)
    session.handshake_wall_ns = time.perf_counter_ns() - t0
    return session


# --------------------------------------------------------------------------
# Byte accounting


def expected_handshake_bytes(suite: AlgorithmSuite, n_kem_offers: int = 1,
                             n_sig_offers: int = 1,
                             subject: str = SERVER_SUBJECT,
                             issuer: str = ISSUER_NAME) -> int:
    """Exact wire bytes for a full handshake under this suite.

    Total = framing constant + KEM share + KEM ciphertext + certificate
    public key + 2 signatures (certificate issuer + certificate verify).
    """
    kem_p = algorithm_params(suite.kem)
    sig_p = algorithm_params(suite.sig)
    ch = RECORD_HEADER + 1 + RANDOM_BYTES + 1 + 2 * n_kem_offers \
        + 1 + 2 * n_sig_offers + 2 + kem_p.public_key_bytes
    sh = RECORD_HEADER + RANDOM_BYTES + 2 + 2 + 2 + kem_p.ciphertext_or_signature_bytes
    cert = RECORD_HEADER + 2 + len(subject) + 2 + 2 + sig_p.public_key_bytes \
        + 2 + len(issuer) + 2 + sig_p.ciphertext_or_signature_bytes
    cv = RECORD_HEADER + 2 + sig_p.ciphertext_or_signature_bytes
    fins = 2 * (RECORD_HEADER + FINISHED_BYTES)
    return ch + sh + cert + cv + fins


def handshake_framing_constant(n_kem_offers: int = 1, n_sig_offers: int = 1,
                               subject: str = SERVER_SUBJECT,
                               issuer: str = ISSUER_NAME) -> int:
    """Suite-independent part of the handshake byte total."""
    ch = 1 + RANDOM_BYTES + 1 + 2 * n_kem_offers + 1 + 2 * n_sig_offers + 2
    sh = RANDOM_BYTES + 2 + 2 + 2
    cert = 2 + len(subject) + 2 + 2 + 2 + len(issuer) + 2
    return 6 * RECORD_HEADER + ch + sh + cert + 2 + 2 * FINISHED_BYTES
