import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqcdns import transport
from pqcdns.errors import MalformedHttp, Oversize, TruncatedFrame, WrongContentType
from pqcdns.transport import DohCodec, TransportKind


def test_default_ports():
    assert TransportKind.DOT.default_port == 853
    assert TransportKind.DOH.default_port == 443
    assert TransportKind.UDP_PLAIN.default_port == 53


@settings(max_examples=100, deadline=None)
@given(payload=st.binary(max_size=2000))
def test_dot_roundtrip(payload):
    framed = transport.frame_dot(payload)
    assert len(framed) == len(payload) + 2
    assert transport.deframe_dot(framed) == payload


def test_dot_rejects_oversize():
    with pytest.raises(Oversize):
        transport.frame_dot(b"x" * 65536)


def test_dot_truncated_frame():
    with pytest.raises(TruncatedFrame):
        transport.deframe_dot(b"\x00")
    with pytest.raises(TruncatedFrame):
        transport.deframe_dot(b"\x00\x10abc")


@settings(max_examples=100, deadline=None)
@given(payload=st.binary(max_size=2000),
       direction=st.sampled_from(["request", "response"]))
def test_doh_roundtrip_with_constant_overhead(payload, direction):
    codec = DohCodec()
    framed = codec.wrap(payload, direction)
    assert len(framed) == len(payload) + codec.overhead
    assert codec.unwrap(framed) == payload


def test_doh_request_and_response_lines():
    codec = DohCodec()
    assert codec.wrap(b"q", "request").startswith(b"POST /dns-query HTTP/1.1\r\n")
    assert codec.wrap(b"r", "response").startswith(b"HTTP/1.1 200 OK\r\n")


def test_doh_wrong_content_type():
    codec = DohCodec()
    framed = codec.wrap(b"abc", "request")
    bad = framed.replace(b"application/dns-message", b"text/plain;stuffing12")
    with pytest.raises(WrongContentType):
        codec.unwrap(bad)


def test_doh_malformed():
    with pytest.raises(MalformedHttp):
        DohCodec().unwrap(b"not http at all")
    framed = DohCodec().wrap(b"abcdef", "request")
    with pytest.raises(MalformedHttp):
        DohCodec().unwrap(framed[:-3])  # body shorter than Content-Length


def test_doh_pair_overhead_value():
    # Per query/response pair: two HTTP headers replace two 2-byte DoT
    # prefixes.  [DERIVED] 2*170 - 4 = 336 B = 0.328 kB.
    assert transport.doh_pair_overhead_bytes() == 336
    assert 0.1 <= transport.doh_pair_overhead_bytes() / 1024.0 <= 0.5
