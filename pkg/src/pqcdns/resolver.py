"""Authoritative zone stores, recursive resolution simulation, cache, and
a serving endpoint.

Recursion is simulated in-process against three zone stores (root, TLD,
authoritative) so the per-hop timing structure is observable without
inter-container networking.  Each hop's trace entry carries query build,
response, and validation durations taken from consecutive timestamps, so
their sum plus the return step tiles the wall-clock resolution time.
"""

from __future__ import annotations

import ipaddress
import socket
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field

from . import channel, dnssec, transport, wire
from .errors import BindFailure, ParseError
from .policy import (
    PASS,
    PolicyMode,
    REJECT,
    TRUNCATE_AND_FLAG,
    fragmentation_guard,
)
from .suites import AlgorithmId, CryptoBackend, DEFAULT_BACKEND

ROLE_ROOT = "root"
ROLE_TLD = "tld"
ROLE_AUTH = "authoritative"

STUB = "stub"
RECURSIVE_SIM = "recursive-sim"


# --------------------------------------------------------------------------
# Zone store


def _parse_rdata(rtype: int, text: str) -> bytes:
    if rtype == wire.TYPE_A:
        return ipaddress.IPv4Address(text).packed
    if rtype == wire.TYPE_AAAA:
        return ipaddress.IPv6Address(text).packed
    if rtype in (wire.TYPE_NS, wire.TYPE_CNAME):
        return wire.encode_name(wire.validate_name(text))
    if rtype == wire.TYPE_TXT:
        raw = text.strip('"').encode()
        return bytes([len(raw)]) + raw
    raise ValueError(f"unsupported record type {rtype}")


class ZoneStore:
    """Immutable-after-load rrset index keyed by (name, type)."""

    def __init__(self, zone: str = ""):
        self.zone = wire.validate_name(zone)
        self.rrsets: dict[tuple[str, int], list[wire.ResourceRecord]] = {}
        self.rrsigs: dict[tuple[str, int], wire.ResourceRecord] = {}
        self.key: dnssec.ZoneSigningKey | None = None

    def add(self, rr: wire.ResourceRecord):
        self.rrsets.setdefault((rr.name, rr.rtype), []).append(rr)

    def get(self, name: str, rtype: int) -> list[wire.ResourceRecord] | None:
        return self.rrsets.get((wire.validate_name(name), rtype))

    def sign_all(self, key: dnssec.ZoneSigningKey,
                 validity: tuple[int, int] | None = None,
                 backend: CryptoBackend = DEFAULT_BACKEND):
        self.key = key
        if validity is None:
            now = int(time.time())
            validity = (now - 3600, now + 30 * 86400)
        self.add(key.dnskey_record())
        for rrkey, rrset in list(self.rrsets.items()):
            self.rrsigs[rrkey] = dnssec.sign_rrset(rrset, key, validity, backend)


def load_zone(path: str, zone: str = "") -> ZoneStore:
    """Parse a zone file of ``name ttl type rdata`` lines."""
    store = ZoneStore(zone)
    with open(path) as fh:
        lines = fh.read().splitlines()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(("#", ";")):
            continue
        parts = stripped.split(None, 3)
        if len(parts) != 4:
            raise ParseError(f"expected 'name ttl type rdata': {stripped!r}",
                             line=lineno)
        name, ttl_s, type_s, rdata_s = parts
        try:
            ttl = int(ttl_s)
            rtype = wire.TYPE_BY_NAME[type_s.upper()]
            rdata = _parse_rdata(rtype, rdata_s)
            rr = wire.ResourceRecord(wire.validate_name(name), rtype, ttl, rdata)
        except Exception as exc:
            raise ParseError(str(exc), line=lineno) from exc
        store.add(rr)
    return store


# --------------------------------------------------------------------------
# Three-level signed tree


@dataclass
class ZoneTree:
    root: ZoneStore
    tld: ZoneStore
    auth: ZoneStore
    anchor: dnssec.TrustAnchor | None = None
    dnssec_alg: AlgorithmId | None = None

    def stores(self) -> list[tuple[str, ZoneStore]]:
        return [(ROLE_ROOT, self.root), (ROLE_TLD, self.tld),
                (ROLE_AUTH, self.auth)]


def build_zone_tree(auth_zone: str = "example.test",
                    records: list[wire.ResourceRecord] | None = None,
                    dnssec_alg: AlgorithmId | None = None,
                    backend: CryptoBackend = DEFAULT_BACKEND) -> ZoneTree:
    """Root / TLD / authoritative stores with delegations and, when a
    DNSSEC algorithm is given, a full signed chain plus trust anchor."""
    auth_zone = wire.validate_name(auth_zone)
    tld_zone = ".".join(auth_zone.split(".")[1:])
    root = ZoneStore("")
    tld = ZoneStore(tld_zone)
    auth = ZoneStore(auth_zone)

    root.add(wire.ResourceRecord(tld_zone, wire.TYPE_NS, 86400,
                                 wire.encode_name("ns." + tld_zone)))
    tld.add(wire.ResourceRecord(auth_zone, wire.TYPE_NS, 86400,
                                 wire.encode_name("ns." + auth_zone)))
    if records is None:
        records = [
            wire.ResourceRecord("www." + auth_zone, wire.TYPE_A, 300,
                                _parse_rdata(wire.TYPE_A, "192.0.2.10")),
            wire.ResourceRecord("www." + auth_zone, wire.TYPE_AAAA, 300,
                                _parse_rdata(wire.TYPE_AAAA, "2001:db8::10")),
            wire.ResourceRecord(auth_zone, wire.TYPE_TXT, 300,
                                _parse_rdata(wire.TYPE_TXT, "pqc-dns test zone")),
        ]
    for rr in records:
        auth.add(rr)

    tree = ZoneTree(root, tld, auth)
    if dnssec_alg is not None:
        root_key = dnssec.generate_zone_keys(dnssec_alg, "", backend)
        tld_key = dnssec.generate_zone_keys(dnssec_alg, tld_zone, backend)
        auth_key = dnssec.generate_zone_keys(dnssec_alg, auth_zone, backend)
        # DS of each child lives in its parent and is signed there.
        root.add(dnssec.build_ds(tld_key))
        tld.add(dnssec.build_ds(auth_key))
        root.sign_all(root_key, backend=backend)
        tld.sign_all(tld_key, backend=backend)
        auth.sign_all(auth_key, backend=backend)
        ds_rr = dnssec.build_ds(root_key)
        tree.anchor = dnssec.TrustAnchor(
            zone="", ds=wire.DsData.unpack(ds_rr.rdata),
            dnskey_rdata=root_key.dnskey_rdata())
        tree.dnssec_alg = dnssec_alg
    return tree


def _attach_chain(msg: wire.DnsMessage, tree: ZoneTree, depth: int):
    """Add DNSKEY/DS rrsets (with RRSIGs) for the chain down to ``depth``."""
    chain = tree.stores()[:depth + 1]
    for i, (_, store) in enumerate(chain):
        keyset = store.rrsets.get((store.zone, wire.TYPE_DNSKEY))
        keysig = store.rrsigs.get((store.zone, wire.TYPE_DNSKEY))
        if keyset is None or keysig is None:
            continue
        msg.additional.extend(keyset)
        msg.additional.append(keysig)
        if i > 0:
            parent = chain[i - 1][1]
            ds_set = parent.rrsets.get((store.zone, wire.TYPE_DS))
            ds_sig = parent.rrsigs.get((store.zone, wire.TYPE_DS))
            if ds_set and ds_sig:
                msg.additional.extend(ds_set)
                msg.additional.append(ds_sig)


def answer_from_store(store: ZoneStore, query: wire.DnsMessage,
                      want_dnssec: bool) -> wire.DnsMessage:
    q = query.question[0]
    resp = wire.DnsMessage(id=query.id, qr=True, aa=True, rd=query.rd, ra=True,
                           question=list(query.question))
    rrset = store.get(q.qname, q.qtype)
    if rrset is None:
        resp.rcode = wire.RCODE_NXDOMAIN
    else:
        resp.answers.extend(rrset)
        if want_dnssec:
            sig = store.rrsigs.get((q.qname, q.qtype))
            if sig is not None:
                resp.answers.append(sig)
    opt = query._opt()
    if opt is not None:
        resp.additional.append(opt)
    return resp


def hop_response(tree: ZoneTree, depth: int, query: wire.DnsMessage,
                 want_dnssec: bool) -> wire.DnsMessage:
    """Response from hop ``depth`` (0=root, 1=TLD, 2=authoritative).

    Intermediate hops answer with the signed NS delegation for the next
    zone cut; the last hop answers the actual question.  With DNSSEC on,
    the full validation chain down to the answering zone rides along.
    """
    role, store = tree.stores()[depth]
    if depth < 2:
        child_zone = tree.stores()[depth + 1][1].zone
        referral_q = wire.DnsMessage(id=query.id, question=[
            wire.Question(child_zone, wire.TYPE_NS)])
        if query._opt() is not None:
            referral_q.additional.append(query._opt())
        resp = answer_from_store(store, referral_q, want_dnssec)
    else:
        resp = answer_from_store(store, query, want_dnssec)
    if want_dnssec and tree.dnssec_alg is not None:
        _attach_chain(resp, tree, depth)
    return resp


# --------------------------------------------------------------------------
# Cache


@dataclass
class CacheEntry:
    message: wire.DnsMessage
    expiry: float


class ResponseCache:
    """LRU with TTL expiry; synchronized; Bogus responses are never stored."""

    def __init__(self, max_entries: int = 1024, clock=time.monotonic):
        self.max_entries = max_entries
        self._clock = clock
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple, CacheEntry] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key: tuple) -> wire.DnsMessage | None:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None or self._clock() >= entry.expiry:
                if entry is not None:
                    del self._entries[key]
                self.misses += 1
                return None
            self._entries.move_to_end(key)
            self.hits += 1
            return entry.message

    def put(self, key: tuple, message: wire.DnsMessage, outcome: str | None):
        if outcome == dnssec.BOGUS:
            return
        ttls = [rr.ttl for rr in message.answers
                if rr.rtype != wire.TYPE_OPT] or [3600]
        with self._lock:
            self._entries[key] = CacheEntry(message, self._clock() + min(ttls))
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)


def cache_access(cache: ResponseCache, key: tuple,
                 maybe_message: wire.DnsMessage | None = None,
                 outcome: str | None = None):
    """Get on ``maybe_message is None`` (returns message or None), store
    otherwise (returns "stored" or "dropped")."""
    if maybe_message is None:
        return cache.get(key)
    before = len(cache._entries)
    cache.put(key, maybe_message, outcome)
    return "stored" if len(cache._entries) > before or key in cache._entries \
        else "dropped"


# --------------------------------------------------------------------------
# Resolution


@dataclass
class ResolutionStep:
    role: str
    t_query: float
    t_response: float
    t_dnssec: float


@dataclass
class ResolutionTrace:
    steps: list[ResolutionStep] = field(default_factory=list)
    t_return: float = 0.0
    outcome: str | None = None
    from_cache: bool = False

    @property
    def n(self) -> int:
        return len(self.steps)

    def total(self) -> float:
        return sum(s.t_query + s.t_response + s.t_dnssec
                   for s in self.steps) + self.t_return


class Resolver:
    """Validating resolver over in-process zone stores."""

    def __init__(self, tree: ZoneTree, dnssec_enabled: bool = False,
                 cache: ResponseCache | None = None,
                 backend: CryptoBackend = DEFAULT_BACKEND):
        self.tree = tree
        self.dnssec_enabled = dnssec_enabled
        self.cache = cache
        self.backend = backend

    def resolve(self, query: wire.DnsMessage, mode: str = RECURSIVE_SIM,
                delta_dnssec: bool | None = None
                ) -> tuple[wire.DnsMessage, ResolutionTrace]:
        if delta_dnssec is None:
            delta_dnssec = self.dnssec_enabled
        q = query.question[0]
        key = (q.qname, q.qtype, bool(delta_dnssec))
        trace = ResolutionTrace()
        start = time.perf_counter()

        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                mark = time.perf_counter()
                resp = wire.DnsMessage(**{**cached.__dict__})
                resp.id = query.id
                trace.steps.append(ResolutionStep(ROLE_AUTH, mark - start,
                                                  time.perf_counter() - mark, 0.0))
                trace.t_return = 0.0
                trace.from_cache = True
                trace.outcome = dnssec.SECURE if delta_dnssec else None
                return resp, trace

        depths = [2] if mode == STUB else [0, 1, 2]
        final = None
        outcome = None
        prev = start
        for depth in depths:
            role = self.tree.stores()[depth][0]
            hop_q = wire.DnsMessage(**{**query.__dict__})
            t_q_end = time.perf_counter()
            resp = hop_response(self.tree, depth, hop_q, delta_dnssec)
            t_r_end = time.perf_counter()
            if delta_dnssec and self.tree.anchor is not None:
                hop_outcome, _ = dnssec.validate_chain(
                    resp, self.tree.anchor, self.backend)
                if hop_outcome == dnssec.BOGUS:
                    outcome = dnssec.BOGUS
                elif outcome is None:
                    outcome = hop_outcome
                t_v_end = time.perf_counter()
            else:
                t_v_end = t_r_end
            trace.steps.append(ResolutionStep(
                role, t_q_end - prev, t_r_end - t_q_end, t_v_end - t_r_end))
            prev = t_v_end
            final = resp

        if outcome == dnssec.BOGUS:
            final = wire.DnsMessage(id=query.id, qr=True, rd=query.rd, ra=True,
                                    rcode=wire.RCODE_SERVFAIL,
                                    question=list(query.question))
        else:
            # Validation happened here; the client gets the answer and its
            # RRSIG with the AD bit, not the chain material.
            final.authority = []
            final.additional = [rr for rr in final.additional
                                if rr.rtype == wire.TYPE_OPT]
            if delta_dnssec and outcome == dnssec.SECURE:
                final.ad = True
        trace.outcome = outcome

        if self.cache is not None and final.rcode == wire.RCODE_NOERROR:
            self.cache.put(key, final, outcome)
        trace.t_return = time.perf_counter() - prev
        return final, trace


# --------------------------------------------------------------------------
# Serving endpoint


@dataclass
class EndpointConfig:
    tree: ZoneTree
    identity: channel.ServerIdentity
    supported_kems: list[AlgorithmId]
    supported_sigs: list[AlgorithmId]
    policy_mode: PolicyMode = PolicyMode.ALLOW_LEGACY
    transport_kind: transport.TransportKind = transport.TransportKind.DOT
    dnssec_enabled: bool = False
    cache_enabled: bool = False
    host: str = "127.0.0.1"
    port: int = 0
    udp_port: int | None = None
    backend: CryptoBackend = DEFAULT_BACKEND
    timeout: float = 30.0


@dataclass
class Counters:
    sessions: int = 0
    messages: int = 0
    bytes_in: int = 0
    bytes_out: int = 0
    downgrade_rejections: int = 0
    handshake_failures: int = 0

    def snapshot(self) -> dict:
        return dict(self.__dict__)


class ResolverEndpoint:
    """Threaded TCP endpoint (secure channel) plus optional plain-UDP port."""

    def __init__(self, config: EndpointConfig):
        self.config = config
        self.counters = Counters()
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self.resolver = Resolver(
            config.tree, config.dnssec_enabled,
            ResponseCache() if config.cache_enabled else None, config.backend)
        self._codec = transport.DohCodec()
        try:
            self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self._sock.bind((config.host, config.port))
        except OSError as exc:
            raise BindFailure(f"cannot bind {config.host}:{config.port}: {exc}") from exc
        self._sock.listen(512)
        self.port = self._sock.getsockname()[1]
        self._udp_sock = None
        self.udp_port = None
        if config.udp_port is not None:
            try:
                self._udp_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
                self._udp_sock.bind((config.host, config.udp_port))
            except OSError as exc:
                self._sock.close()
                raise BindFailure(f"cannot bind UDP {config.udp_port}: {exc}") from exc
            self.udp_port = self._udp_sock.getsockname()[1]

    def start(self):
        accept = threading.Thread(target=self._accept_loop, daemon=True)
        accept.start()
        self._threads.append(accept)
        if self._udp_sock is not None:
            udp = threading.Thread(target=self._udp_loop, daemon=True)
            udp.start()
            self._threads.append(udp)
        return self

    def stop(self):
        self._stop.set()
        try:
            self._sock.close()
        except OSError:
            pass
        if self._udp_sock is not None:
            try:
                self._udp_sock.close()
            except OSError:
                pass

    def _accept_loop(self):
        while not self._stop.is_set():
            try:
                client, _ = self._sock.accept()
            except OSError:
                return
            t = threading.Thread(target=self._session, args=(client,), daemon=True)
            t.start()

    def _session(self, sock: socket.socket):
        cfg = self.config
        scfg = channel.ServerConfig(cfg.identity, cfg.supported_kems,
                                    cfg.supported_sigs, cfg.policy_mode,
                                    cfg.backend, cfg.timeout)
        try:
            session = channel.run_server_handshake(sock, scfg)
        except channel.DowngradeRejected:
            with self._lock:
                self.counters.downgrade_rejections += 1
            sock.close()
            return
        except Exception:
            with self._lock:
                self.counters.handshake_failures += 1
            sock.close()
            return
        with self._lock:
            self.counters.sessions += 1
        try:
            while not self._stop.is_set():
                try:
                    framed = session.recv_app()
                except (ConnectionError, OSError):
                    break
                query_bytes = self._deframe(framed, "request")
                query = wire.decode_message(query_bytes)
                with self._lock:
                    self.counters.messages += 1
                    self.counters.bytes_in += len(framed)
                resp, _ = self.resolver.resolve(query)
                resp_bytes = wire.encode_message(resp)
                out = self._frame(resp_bytes, "response")
                session.send_app(out)
                with self._lock:
                    self.counters.messages += 1
                    self.counters.bytes_out += len(out)
        finally:
            try:
                session.close()
            except Exception:
                pass

    def _frame(self, dns_bytes: bytes, direction: str) -> bytes:
        if self.config.transport_kind == transport.TransportKind.DOH:
            return self._codec.wrap(dns_bytes, direction)
        return transport.frame_dot(dns_bytes)

    def _deframe(self, framed: bytes, direction: str) -> bytes:
        if self.config.transport_kind == transport.TransportKind.DOH:
            return self._codec.unwrap(framed)
        return transport.deframe_dot(framed)

    def _udp_loop(self):
        while not self._stop.is_set():
            try:
                data, addr = self._udp_sock.recvfrom(65535)
            except OSError:
                return
            try:
                query = wire.decode_message(data)
            except Exception:
                continue
            with self._lock:
                self.counters.messages += 1
                self.counters.bytes_in += len(data)
            # Plain UDP answers authoritatively from the leaf store; the
            # signed answer alone is what rides in a datagram.
            want = wire.has_do_bit(query) and self.config.dnssec_enabled
            resp = answer_from_store(self.config.tree.auth, query, want)
            out = wire.encode_message(resp)
            advertised = wire.edns_payload_size(query) or 512
            verdict = fragmentation_guard(len(out),
                                          transport.TransportKind.UDP_PLAIN,
                                          advertised)
            if verdict == REJECT:
                continue
            if verdict == TRUNCATE_AND_FLAG:
                out = wire.encode_message(wire.truncated_copy(resp))
            with self._lock:
                self.counters.messages += 1
                self.counters.bytes_out += len(out)
            try:
                self._udp_sock.sendto(out, addr)
            except OSError:
                pass


def serve(config: EndpointConfig) -> ResolverEndpoint:
    return ResolverEndpoint(config).start()


# --------------------------------------------------------------------------
# Client helper


class ResolverClient:
    """Client side of one secure session against a ResolverEndpoint."""

    def __init__(self, host: str, port: int, client_config: channel.ClientConfig,
                 transport_kind: transport.TransportKind = transport.TransportKind.DOT):
        self.transport_kind = transport_kind
        self._codec = transport.DohCodec()
        sock = socket.create_connection((host, port),
                                        timeout=client_config.timeout)
        self.session = channel.run_client_handshake(sock, client_config)

    def query(self, name: str, rtype: int = wire.TYPE_A,
              want_dnssec: bool = False) -> wire.DnsMessage:
        q = wire.build_query(name, rtype, want_dnssec)
        raw = wire.encode_message(q)
        if self.transport_kind == transport.TransportKind.DOH:
            framed = self._codec.wrap(raw, "request")
        else:
            framed = transport.frame_dot(raw)
        self.session.send_app(framed)
        resp_framed = self.session.recv_app()
        if self.transport_kind == transport.TransportKind.DOH:
            resp_raw = self._codec.unwrap(resp_framed)
        else:
            resp_raw = transport.deframe_dot(resp_framed)
        return wire.decode_message(resp_raw)

    @property
    def bytes_total(self) -> int:
        return self.session.conn.total_bytes

    def close(self):
        self.session.close()
