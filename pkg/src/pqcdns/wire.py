"""DNS wire format: messages, resource records, encode/decode.

Names are handled as lowercase dotted strings without the trailing dot
("example.com"; the root is ""). The encoder never emits compression
pointers, which keeps byte accounting deterministic; the decoder accepts
them with a loop guard.
"""

from __future__ import annotations

import random
import struct
from dataclasses import dataclass, field, replace

from .errors import CompressionLoop, InvalidName, Malformed, OversizeRecord

TYPE_A = 1
TYPE_NS = 2
TYPE_CNAME = 5
TYPE_SOA = 6
TYPE_TXT = 16
TYPE_AAAA = 28
TYPE_OPT = 41
TYPE_DS = 43
TYPE_RRSIG = 46
TYPE_DNSKEY = 48

TYPE_NAMES = {
    TYPE_A: "A", TYPE_NS: "NS", TYPE_CNAME: "CNAME", TYPE_SOA: "SOA",
    TYPE_TXT: "TXT", TYPE_AAAA: "AAAA", TYPE_OPT: "OPT", TYPE_DS: "DS",
    TYPE_RRSIG: "RRSIG", TYPE_DNSKEY: "DNSKEY",
}
TYPE_BY_NAME = {v: k for k, v in TYPE_NAMES.items()}

CLASS_IN = 1

RCODE_NOERROR = 0
RCODE_SERVFAIL = 2
RCODE_NXDOMAIN = 3

DEFAULT_EDNS_PAYLOAD = 1232
EDNS_DO_FLAG = 0x8000


@dataclass(frozen=True)
class Question:
    qname: str
    qtype: int
    qclass: int = CLASS_IN


@dataclass(frozen=True)
class ResourceRecord:
    name: str
    rtype: int
    ttl: int
    rdata: bytes
    rclass: int = CLASS_IN


@dataclass
class DnsMessage:
    id: int = 0
    qr: bool = False
    opcode: int = 0
    aa: bool = False
    tc: bool = False
    rd: bool = True
    ra: bool = False
    ad: bool = False
    cd: bool = False
    rcode: int = RCODE_NOERROR
    question: list[Question] = field(default_factory=list)
    answers: list[ResourceRecord] = field(default_factory=list)
    authority: list[ResourceRecord] = field(default_factory=list)
    additional: list[ResourceRecord] = field(default_factory=list)

    def _opt(self) -> ResourceRecord | None:
        for rr in self.additional:
            if rr.rtype == TYPE_OPT:
                return rr
        return None


# The DO bit lives in the upper 16 bits of the OPT TTL field.
def _opt_record(do: bool, payload_size: int) -> ResourceRecord:
    ttl = EDNS_DO_FLAG if do else 0
    return ResourceRecord(name="", rtype=TYPE_OPT, ttl=ttl, rdata=b"",
                          rclass=payload_size)


def has_do_bit(m: DnsMessage) -> bool:
    opt = m._opt()
    return opt is not None and bool(opt.ttl & EDNS_DO_FLAG)


def edns_payload_size(m: DnsMessage) -> int | None:
    opt = m._opt()
    return opt.rclass if opt is not None else None


# --------------------------------------------------------------------------
# Typed rdata payloads


@dataclass(frozen=True)
class RrsigData:
    type_covered: int
    algorithm: int
    labels: int
    original_ttl: int
    expiration: int
    inception: int
    key_tag: int
    signer: str
    signature: bytes

    def pack(self) -> bytes:
        return (struct.pack(">HBBIIIH", self.type_covered, self.algorithm,
                            self.labels, self.original_ttl, self.expiration,
                            self.inception, self.key_tag)
                + encode_name(self.signer) + self.signature)

    @classmethod
    def unpack(cls, rdata: bytes) -> "RrsigData":
        if len(rdata) < 18:
            raise Malformed("RRSIG rdata too short")
        tc, alg, labels, ottl, exp, inc, tag = struct.unpack(">HBBIIIH", rdata[:18])
        signer, off = _decode_name_nocompress(rdata, 18)
        return cls(tc, alg, labels, ottl, exp, inc, tag, signer, rdata[off:])


@dataclass(frozen=True)
class DnskeyData:
    flags: int
    protocol: int
    algorithm: int
    public_key: bytes

    def pack(self) -> bytes:
        return struct.pack(">HBB", self.flags, self.protocol, self.algorithm) + self.public_key

    @classmethod
    def unpack(cls, rdata: bytes) -> "DnskeyData":
        if len(rdata) < 4:
            raise Malformed("DNSKEY rdata too short")
        flags, proto, alg = struct.unpack(">HBB", rdata[:4])
        return cls(flags, proto, alg, rdata[4:])


@dataclass(frozen=True)
class DsData:
    key_tag: int
    algorithm: int
    digest_type: int
    digest: bytes

    def pack(self) -> bytes:
        return struct.pack(">HBB", self.key_tag, self.algorithm, self.digest_type) + self.digest

    @classmethod
    def unpack(cls, rdata: bytes) -> "DsData":
        if len(rdata) < 4:
            raise Malformed("DS rdata too short")
        tag, alg, dt = struct.unpack(">HBB", rdata[:4])
        return cls(tag, alg, dt, rdata[4:])


# --------------------------------------------------------------------------
# Names


def validate_name(name: str) -> str:
    name = name.rstrip(".").lower()
    if name == "":
        return name
    labels = name.split(".")
    for label in labels:
        if not label:
            raise InvalidName(f"empty label in {name!r}")
        if len(label) > 63:
            raise InvalidName(f"label longer than 63 bytes in {name!r}")
    if len(name) + 1 > 255:
        raise InvalidName(f"name longer than 255 bytes: {name!r}")
    return name


def encode_name(name: str) -> bytes:
    out = b""
    if name:
        for label in name.split("."):
            raw = label.encode("ascii")
            if not 1 <= len(raw) <= 63:
                raise OversizeRecord(f"label {label!r} not encodable")
            out += bytes([len(raw)]) + raw
    out += b"\x00"
    if len(out) > 255:
        raise OversizeRecord(f"name {name!r} exceeds 255 bytes")
    return out


def _decode_name(buf: bytes, offset: int) -> tuple[str, int]:
    """Decode a possibly compressed name; returns (name, next offset)."""
    labels = []
    seen = set()
    pos = offset
    end = None  # offset after the name at the original position
    while True:
        if pos >= len(buf):
            raise Malformed("name runs past end of buffer", offset=pos)
        length = buf[pos]
        if length & 0xC0 == 0xC0:
            if pos + 1 >= len(buf):
                raise Malformed("truncated compression pointer", offset=pos)
            target = ((length & 0x3F) << 8) | buf[pos + 1]
            if end is None:
                end = pos + 2
            if target in seen:
                raise CompressionLoop("compression pointer loop", offset=pos)
            seen.add(target)
            pos = target
            continue
        if length & 0xC0:
            raise Malformed(f"reserved label type {length:#x}", offset=pos)
        pos += 1
        if length == 0:
            break
        if pos + length > len(buf):
            raise Malformed("label runs past end of buffer", offset=pos)
        labels.append(buf[pos:pos + length].decode("ascii", errors="replace").lower())
        pos += length
        if sum(len(l) + 1 for l in labels) > 255:
            raise Malformed("decoded name exceeds 255 bytes", offset=pos)
    return ".".join(labels), end if end is not None else pos


def _decode_name_nocompress(buf: bytes, offset: int) -> tuple[str, int]:
    name, end = _decode_name(buf, offset)
    return name, end


# --------------------------------------------------------------------------
# Messages


def build_query(name: str, rtype: int, want_dnssec: bool,
                payload_size: int = DEFAULT_EDNS_PAYLOAD,
                msg_id: int | None = None) -> DnsMessage:
    qname = validate_name(name)
    m = DnsMessage(id=random.getrandbits(16) if msg_id is None else msg_id,
                   rd=True, question=[Question(qname, rtype)])
    if want_dnssec:
        m.additional.append(_opt_record(True, payload_size))
    return m


def _pack_flags(m: DnsMessage) -> int:
    return ((int(m.qr) << 15) | (m.opcode << 11) | (int(m.aa) << 10)
            | (int(m.tc) << 9) | (int(m.rd) << 8) | (int(m.ra) << 7)
            | (int(m.ad) << 5) | (int(m.cd) << 4) | (m.rcode & 0xF))


def encode_message(m: DnsMessage) -> bytes:
    out = struct.pack(">HHHHHH", m.id, _pack_flags(m), len(m.question),
                      len(m.answers), len(m.authority), len(m.additional))
    for q in m.question:
        out += encode_name(q.qname) + struct.pack(">HH", q.qtype, q.qclass)
    for rr in m.answers + m.authority + m.additional:
        if len(rr.rdata) > 65535:
            raise OversizeRecord(f"rdata of {len(rr.rdata)} bytes in {rr.name!r}")
        out += (encode_name(rr.name)
                + struct.pack(">HHIH", rr.rtype, rr.rclass, rr.ttl & 0xFFFFFFFF,
                              len(rr.rdata))
                + rr.rdata)
    return out


def decode_message(buf: bytes) -> DnsMessage:
    if len(buf) < 12:
        raise Malformed("truncated header", offset=len(buf))
    mid, flags, qd, an, ns, ar = struct.unpack(">HHHHHH", buf[:12])
    m = DnsMessage(
        id=mid,
        qr=bool(flags & 0x8000), opcode=(flags >> 11) & 0xF,
        aa=bool(flags & 0x0400), tc=bool(flags & 0x0200),
        rd=bool(flags & 0x0100), ra=bool(flags & 0x0080),
        ad=bool(flags & 0x0020), cd=bool(flags & 0x0010),
        rcode=flags & 0xF)
    pos = 12
    for _ in range(qd):
        qname, pos = _decode_name(buf, pos)
        if pos + 4 > len(buf):
            raise Malformed("truncated question", offset=pos)
        qtype, qclass = struct.unpack(">HH", buf[pos:pos + 4])
        pos += 4
        m.question.append(Question(qname, qtype, qclass))
    for section, count in ((m.answers, an), (m.authority, ns), (m.additional, ar)):
        for _ in range(count):
            name, pos = _decode_name(buf, pos)
            if pos + 10 > len(buf):
                raise Malformed("truncated record header", offset=pos)
            rtype, rclass, ttl, rdlen = struct.unpack(">HHIH", buf[pos:pos + 10])
            pos += 10
            if pos + rdlen > len(buf):
                raise Malformed("rdata runs past end of buffer", offset=pos)
            section.append(ResourceRecord(name, rtype, ttl, buf[pos:pos + rdlen], rclass))
            pos += rdlen
    return m


def truncated_copy(m: DnsMessage) -> DnsMessage:
    """TC-bit response used when a UDP answer exceeds the advertised max."""
    out = DnsMessage(id=m.id, qr=True, opcode=m.opcode, aa=m.aa, tc=True,
                     rd=m.rd, ra=m.ra, ad=False, cd=m.cd, rcode=m.rcode,
                     question=list(m.question))
    opt = m._opt()
    if opt is not None:
        out.additional.append(opt)
    return out
