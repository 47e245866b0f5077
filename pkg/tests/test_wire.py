import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqcdns import wire
from pqcdns.errors import CompressionLoop, InvalidName, Malformed, OversizeRecord

LABEL = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789-",
                min_size=1, max_size=10).filter(
                    lambda s: not s.startswith("-") and not s.endswith("-"))
NAME = st.lists(LABEL, min_size=0, max_size=4).map(".".join)


def test_build_query_shape():
    q = wire.build_query("www.example.test", wire.TYPE_A, want_dnssec=True,
                         msg_id=42)
    assert q.id == 42
    assert q.question[0].qname == "www.example.test"
    assert wire.has_do_bit(q)
    assert wire.edns_payload_size(q) == 1232


def test_query_without_dnssec_has_no_opt():
    q = wire.build_query("example.test", wire.TYPE_A, want_dnssec=False)
    assert not wire.has_do_bit(q)
    assert wire.edns_payload_size(q) is None


def test_do_bit_lives_in_opt_ttl_high_bits():
    opt = wire._opt_record(True, 4096)
    assert opt.ttl == 0x8000
    assert opt.rclass == 4096


def test_name_validation():
    with pytest.raises(InvalidName):
        wire.validate_name("a..b")
    with pytest.raises(InvalidName):
        wire.validate_name("x" * 64 + ".com")
    with pytest.raises(InvalidName):
        wire.validate_name(".".join(["abcdefg"] * 40))
    assert wire.validate_name("WWW.Example.COM.") == "www.example.com"


def test_encode_name_oracle():
    # Hand-assembled per the wire format definition.
    assert wire.encode_name("www.example.com") == (
        b"\x03www\x07example\x03com\x00")
    assert wire.encode_name("") == b"\x00"


@settings(max_examples=200, deadline=None)
@given(name=NAME, rtype=st.sampled_from([wire.TYPE_A, wire.TYPE_AAAA,
                                         wire.TYPE_TXT, wire.TYPE_NS]),
       msg_id=st.integers(0, 0xFFFF),
       rdata=st.binary(max_size=64), do=st.booleans())
def test_message_roundtrip(name, rtype, msg_id, rdata, do):
    m = wire.build_query(name, rtype, want_dnssec=do, msg_id=msg_id)
    m.qr = True
    m.answers.append(wire.ResourceRecord(name, rtype, 300, rdata))
    decoded = wire.decode_message(wire.encode_message(m))
    assert decoded.id == m.id
    assert decoded.question == m.question
    assert decoded.answers == m.answers
    assert wire.has_do_bit(decoded) == do


@settings(max_examples=200, deadline=None)
@given(blob=st.binary(max_size=40))
def test_decoder_never_crashes_on_garbage(blob):
    try:
        wire.decode_message(blob)
    except (Malformed, CompressionLoop):
        pass


def test_malformed_reports_offset():
    with pytest.raises(Malformed) as exc_info:
        wire.decode_message(b"\x00" * 5)
    assert exc_info.value.offset is not None


def test_compression_pointer_decode():
    # Header + question whose name points at a name placed after it is not
    # representable here; instead decode an answer name via pointer to the
    # question name at offset 12.
    q = wire.build_query("abc.test", wire.TYPE_A, False, msg_id=1)
    raw = bytearray(wire.encode_message(q))
    # Append one answer record using a pointer to offset 12.
    raw[6:8] = (1).to_bytes(2, "big")  # ancount = 1
    raw += b"\xc0\x0c" + (wire.TYPE_A).to_bytes(2, "big") + (1).to_bytes(2, "big")
    raw += (300).to_bytes(4, "big") + (4).to_bytes(2, "big") + bytes([1, 2, 3, 4])
    decoded = wire.decode_message(bytes(raw))
    assert decoded.answers[0].name == "abc.test"


def test_compression_loop_guard():
    q = wire.build_query("abc.test", wire.TYPE_A, False, msg_id=1)
    raw = bytearray(wire.encode_message(q))
    offset = len(raw)
    raw[6:8] = (1).to_bytes(2, "big")
    raw += b"\xc0" + bytes([offset])  # pointer to itself
    raw += (wire.TYPE_A).to_bytes(2, "big") + (1).to_bytes(2, "big")
    raw += (300).to_bytes(4, "big") + (0).to_bytes(2, "big")
    with pytest.raises(CompressionLoop):
        wire.decode_message(bytes(raw))


def test_encoder_rejects_oversize_rdata():
    m = wire.DnsMessage(question=[wire.Question("a.test", wire.TYPE_TXT)])
    m.answers.append(wire.ResourceRecord("a.test", wire.TYPE_TXT, 1,
                                         b"x" * 65536))
    with pytest.raises(OversizeRecord):
        wire.encode_message(m)


def test_encoding_is_deterministic():
    m = wire.build_query("www.example.test", wire.TYPE_A, True, msg_id=7)
    assert wire.encode_message(m) == wire.encode_message(m)


def test_truncated_copy_sets_tc_and_drops_answers():
    m = wire.build_query("a.test", wire.TYPE_A, True, msg_id=3)
    m.qr = True
    m.answers.append(wire.ResourceRecord("a.test", wire.TYPE_A, 1, b"\x7f\0\0\1"))
    t = wire.truncated_copy(m)
    assert t.tc and t.qr and t.id == 3
    assert not t.answers
    assert wire.has_do_bit(t)


def test_rrsig_rdata_roundtrip():
    data = wire.RrsigData(wire.TYPE_A, 240, 3, 300, 2000, 1000, 4660,
                          "example.test", b"\xaa" * 16)
    assert wire.RrsigData.unpack(data.pack()) == data


def test_dnskey_ds_rdata_roundtrip():
    dk = wire.DnskeyData(256, 3, 240, b"\x01" * 32)
    assert wire.DnskeyData.unpack(dk.pack()) == dk
    ds = wire.DsData(4660, 240, 2, b"\x02" * 32)
    assert wire.DsData.unpack(ds.pack()) == ds
