"""DoT and DoH framings for DNS payloads.

DoT is the standard 2-byte length prefix.  DoH here is an HTTP/1.1-shaped
minimal framing whose per-message overhead is a fixed, configurable
constant (padded to the byte), so the DoH-vs-DoT bandwidth delta is
deterministic.  UdpPlain carries bare DNS messages and exists for
DNSSEC-only runs and fragmentation-guard behavior.
"""

from __future__ import annotations

import enum

from .errors import MalformedHttp, Oversize, TruncatedFrame, WrongContentType

MAX_DNS_MESSAGE = 65535

# Per-message HTTP framing overhead in bytes (header block incl. final CRLF).
DEFAULT_DOH_OVERHEAD = 170

CONTENT_TYPE = "application/dns-message"


class TransportKind(enum.Enum):
    DOT = "dot"
    DOH = "doh"
    UDP_PLAIN = "udp"

    @property
    def default_port(self) -> int:
        return {"dot": 853, "doh": 443, "udp": 53}[self.value]


def frame_dot(dns_bytes: bytes) -> bytes:
    if len(dns_bytes) > MAX_DNS_MESSAGE:
        raise Oversize(f"DNS message of {len(dns_bytes)} bytes cannot be framed")
    return len(dns_bytes).to_bytes(2, "big") + dns_bytes


def deframe_dot(framed: bytes) -> bytes:
    if len(framed) < 2:
        raise TruncatedFrame("missing length prefix")
    n = int.from_bytes(framed[:2], "big")
    if len(framed) < 2 + n:
        raise TruncatedFrame(f"declared {n} bytes, only {len(framed) - 2} available")
    return framed[2:2 + n]


class DohCodec:
    """HTTP/1.1-shaped DoH framing with a constant per-message overhead."""

    def __init__(self, overhead: int = DEFAULT_DOH_OVERHEAD):
        self.overhead = overhead

    def _headers(self, first_line: str, body_len: int) -> bytes:
        base = (f"{first_line}\r\n"
                f"Content-Type: {CONTENT_TYPE}\r\n"
                f"Content-Length: {body_len:05d}\r\n")
        pad_hdr = "X-Pad: "
        fixed = len(base) + len(pad_hdr) + 2 + 2  # pad CRLF + blank line
        if fixed > self.overhead:
            raise Oversize(f"overhead {self.overhead} too small for header block")
        padding = "p" * (self.overhead - fixed)
        return (base + pad_hdr + padding + "\r\n\r\n").encode("ascii")

    def wrap(self, dns_bytes: bytes, direction: str) -> bytes:
        if len(dns_bytes) > MAX_DNS_MESSAGE:
            raise Oversize(f"DNS message of {len(dns_bytes)} bytes cannot be framed")
        if direction == "request":
            first = "POST /dns-query HTTP/1.1"
        elif direction == "response":
            first = "HTTP/1.1 200 OK"
        else:
            raise ValueError(f"direction must be request/response, got {direction!r}")
        return self._headers(first, len(dns_bytes)) + dns_bytes

    def unwrap(self, http_bytes: bytes) -> bytes:
        sep = http_bytes.find(b"\r\n\r\n")
        if sep < 0:
            raise MalformedHttp("no header/body separator")
        header = http_bytes[:sep].decode("ascii", errors="replace")
        body = http_bytes[sep + 4:]
        lines = header.split("\r\n")
        fields = {}
        for line in lines[1:]:
            if ":" not in line:
                raise MalformedHttp(f"bad header line: {line!r}")
            k, v = line.split(":", 1)
            fields[k.strip().lower()] = v.strip()
        if fields.get("content-type") != CONTENT_TYPE:
            raise WrongContentType(
                f"expected {CONTENT_TYPE}, got {fields.get('content-type')!r}")
        try:
            n = int(fields.get("content-length", ""))
        except ValueError:
            raise MalformedHttp("missing or non-numeric Content-Length") from None
        if len(body) < n:
            raise MalformedHttp(f"body truncated: {len(body)} < {n}")
        return body[:n]


_DEFAULT_CODEC = DohCodec()


def wrap_doh(dns_bytes: bytes, direction: str) -> bytes:
    return _DEFAULT_CODEC.wrap(dns_bytes, direction)


def unwrap_doh(http_bytes: bytes) -> bytes:
    return _DEFAULT_CODEC.unwrap(http_bytes)


def doh_pair_overhead_bytes(codec: DohCodec = _DEFAULT_CODEC) -> int:
    """DoH-minus-DoT framing overhead for one query/response pair."""
    return 2 * codec.overhead - 4
