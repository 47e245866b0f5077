"""Zone signing and chain validation with pluggable signature algorithms.

The canonical form for signing follows standard DNSSEC practice: lowercase
owner names, records sorted by rdata, the RRSIG rdata prefix (minus the
signature) prepended.  Post-quantum schemes use the private-use DNSKEY
algorithm numbers declared in ``suites.DNSSEC_ALG_NUMBERS``.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, replace

from . import wire
from .errors import EmptyRrset, InvalidValidity, MissingRecords, RrsetMismatch, WrongKind
from .suites import (
    DNSSEC_ALG_NUMBERS,
    AlgorithmId,
    CryptoBackend,
    DEFAULT_BACKEND,
    Kind,
    algorithm_params,
    get_algorithm,
)

DNSKEY_FLAGS_ZSK = 256
DNSKEY_PROTOCOL = 3
DS_DIGEST_SHA256 = 2

SECURE = "secure"
BOGUS = "bogus"
INSECURE = "insecure"

_ALG_BY_NUMBER = {num: name for name, num in DNSSEC_ALG_NUMBERS.items()}


def dnssec_algorithm_number(alg: AlgorithmId) -> int:
    try:
        return DNSSEC_ALG_NUMBERS[alg.name]
    except KeyError:
        raise WrongKind(f"{alg.name} has no DNSSEC algorithm number") from None


def algorithm_by_dnssec_number(number: int) -> AlgorithmId:
    return get_algorithm(_ALG_BY_NUMBER[number])


@dataclass(frozen=True)
class ZoneSigningKey:
    zone: str
    algorithm: AlgorithmId
    public_key: bytes
    secret_key: bytes

    def dnskey_rdata(self) -> bytes:
        return wire.DnskeyData(DNSKEY_FLAGS_ZSK, DNSKEY_PROTOCOL,
                               dnssec_algorithm_number(self.algorithm),
                               self.public_key).pack()

    @property
    def key_tag(self) -> int:
        return compute_key_tag(self.dnskey_rdata())

    def dnskey_record(self, ttl: int = 3600) -> wire.ResourceRecord:
        return wire.ResourceRecord(self.zone, wire.TYPE_DNSKEY, ttl,
                                   self.dnskey_rdata())


@dataclass(frozen=True)
class TrustAnchor:
    zone: str
    ds: wire.DsData | None = None
    dnskey_rdata: bytes | None = None


def compute_key_tag(dnskey_rdata: bytes) -> int:
    # RFC 4034 appendix B checksum over the DNSKEY rdata.
    acc = 0
    for i, byte in enumerate(dnskey_rdata):
        acc += byte << 8 if i % 2 == 0 else byte
    acc += (acc >> 16) & 0xFFFF
    return acc & 0xFFFF


def generate_zone_keys(alg: AlgorithmId, zone: str = "",
                       backend: CryptoBackend = DEFAULT_BACKEND) -> ZoneSigningKey:
    if alg.kind != Kind.SIGNATURE:
        raise WrongKind(f"{alg.name} is not a signature scheme")
    pk, sk = backend.sig_keygen(alg)
    return ZoneSigningKey(wire.validate_name(zone), alg, pk, sk)


def _check_rrset(rrset: list[wire.ResourceRecord]) -> None:
    if not rrset:
        raise EmptyRrset("cannot sign an empty rrset")
    first = rrset[0]
    for rr in rrset[1:]:
        if (rr.name, rr.rtype, rr.rclass) != (first.name, first.rtype, first.rclass):
            raise RrsetMismatch("rrset members differ in (name, type, class)")


def canonical_signed_data(rrset: list[wire.ResourceRecord],
                          rrsig_prefix: bytes) -> bytes:
    # No compression, lowercase owner names, records ordered by rdata.
    rrs = sorted(rrset, key=lambda rr: rr.rdata)
    out = rrsig_prefix
    for rr in rrs:
        out += wire.encode_name(rr.name.lower())
        out += rr.rtype.to_bytes(2, "big") + rr.rclass.to_bytes(2, "big")
        out += rr.ttl.to_bytes(4, "big")
        out += len(rr.rdata).to_bytes(2, "big") + rr.rdata
    return out


def sign_rrset(rrset: list[wire.ResourceRecord], key: ZoneSigningKey,
               validity: tuple[int, int],
               backend: CryptoBackend = DEFAULT_BACKEND) -> wire.ResourceRecord:
    _check_rrset(rrset)
    inception, expiration = validity
    if expiration <= inception:
        raise InvalidValidity(f"expiration {expiration} <= inception {inception}")
    first = rrset[0]
    labels = 0 if first.name == "" else len(first.name.split("."))
    fields = wire.RrsigData(
        type_covered=first.rtype,
        algorithm=dnssec_algorithm_number(key.algorithm),
        labels=labels,
        original_ttl=first.ttl,
        expiration=expiration,
        inception=inception,
        key_tag=key.key_tag,
        signer=key.zone,
        signature=b"")
    signed = canonical_signed_data(rrset, fields.pack())
    signature = backend.sign(key.algorithm, key.secret_key, signed)
    rdata = replace(fields, signature=signature).pack()
    return wire.ResourceRecord(first.name, wire.TYPE_RRSIG, first.ttl, rdata)


def verify_rrsig(rrset: list[wire.ResourceRecord], rrsig: wire.ResourceRecord,
                 dnskey_rrset: list[wire.ResourceRecord],
                 backend: CryptoBackend = DEFAULT_BACKEND) -> bool:
    try:
        sig = wire.RrsigData.unpack(rrsig.rdata)
    except Exception:
        return False
    if not rrset or rrset[0].rtype != sig.type_covered:
        return False
    prefix = replace(sig, signature=b"").pack()
    signed = canonical_signed_data(rrset, prefix)
    for keyrr in dnskey_rrset:
        try:
            dk = wire.DnskeyData.unpack(keyrr.rdata)
        except Exception:
            continue
        if dk.algorithm != sig.algorithm:
            continue
        if compute_key_tag(keyrr.rdata) != sig.key_tag:
            continue
        alg = algorithm_by_dnssec_number(dk.algorithm)
        if backend.verify(alg, dk.public_key, signed, sig.signature):
            return True
    return False


def build_ds(key: ZoneSigningKey, digest_alg: str = "sha256") -> wire.ResourceRecord:
    rdata = key.dnskey_rdata()
    digest = hashlib.new(digest_alg,
                         wire.encode_name(key.zone) + rdata).digest()
    ds = wire.DsData(key.key_tag, dnssec_algorithm_number(key.algorithm),
                     DS_DIGEST_SHA256, digest)
    return wire.ResourceRecord(key.zone, wire.TYPE_DS, 3600, ds.pack())


def ds_matches_dnskey(ds_rr: wire.ResourceRecord,
                      dnskey_rr: wire.ResourceRecord) -> bool:
    try:
        ds = wire.DsData.unpack(ds_rr.rdata)
    except Exception:
        return False
    digest = hashlib.sha256(wire.encode_name(dnskey_rr.name) + dnskey_rr.rdata).digest()
    return (ds.digest == digest
            and ds.key_tag == compute_key_tag(dnskey_rr.rdata))


def expected_dnssec_bytes(alg: AlgorithmId) -> int:
    """DNSKEY + RRSIG payload bytes a signed answer adds for this algorithm."""
    p = algorithm_params(alg)
    return p.public_key_bytes + p.ciphertext_or_signature_bytes


# --------------------------------------------------------------------------
# Chain validation


def _collect(records: list[wire.ResourceRecord]):
    rrsets: dict[tuple[str, int], list[wire.ResourceRecord]] = {}
    rrsigs: dict[tuple[str, int], wire.ResourceRecord] = {}
    for rr in records:
        if rr.rtype == wire.TYPE_RRSIG:
            sig = wire.RrsigData.unpack(rr.rdata)
            rrsigs[(rr.name, sig.type_covered)] = rr
        elif rr.rtype != wire.TYPE_OPT:
            rrsets.setdefault((rr.name, rr.rtype), []).append(rr)
    return rrsets, rrsigs


def _chain_zones(signer: str, anchor_zone: str) -> list[str]:
    """Zone cut names from the anchor down to the answer's signer."""
    zones = [signer]
    current = signer
    while current != anchor_zone:
        if current == "":
            raise MissingRecords(f"signer {signer!r} not under anchor {anchor_zone!r}")
        current = ".".join(current.split(".")[1:])
        zones.append(current)
    return list(reversed(zones))


def validate_chain(response: wire.DnsMessage, anchor: TrustAnchor,
                   backend: CryptoBackend = DEFAULT_BACKEND) -> tuple[str, float]:
    """Validate a response carrying its full DNSKEY/DS/RRSIG chain.

    Returns (outcome, elapsed seconds).  Outcome is SECURE, BOGUS, or
    INSECURE (unsigned answer).  Raises MissingRecords when the answer is
    signed but the chain is incomplete.
    """
    start = time.perf_counter()
    records = response.answers + response.authority + response.additional
    rrsets, rrsigs = _collect(records)

    if not rrsigs:
        return INSECURE, time.perf_counter() - start

    if not response.question:
        raise MissingRecords("response carries no question")
    q = response.question[0]
    answer = rrsets.get((q.qname, q.qtype))
    answer_sig = rrsigs.get((q.qname, q.qtype))
    if answer is None or answer_sig is None:
        raise MissingRecords("signed response lacks answer rrset or its RRSIG")
    signer = wire.RrsigData.unpack(answer_sig.rdata).signer

    def bogus():
        return BOGUS, time.perf_counter() - start

    try:
        zones = _chain_zones(signer, anchor.zone)
    except MissingRecords:
        raise

    prev_dnskeys: list[wire.ResourceRecord] | None = None
    for i, zone in enumerate(zones):
        dnskeys = rrsets.get((zone, wire.TYPE_DNSKEY))
        dnskey_sig = rrsigs.get((zone, wire.TYPE_DNSKEY))
        if dnskeys is None or dnskey_sig is None:
            raise MissingRecords(f"missing DNSKEY chain material for zone {zone!r}")
        if i == 0:
            # Anchor link: the apex DNSKEY must match the configured anchor.
            anchored = False
            for keyrr in dnskeys:
                if anchor.dnskey_rdata is not None and keyrr.rdata == anchor.dnskey_rdata:
                    anchored = True
                elif anchor.ds is not None:
                    ds_rr = wire.ResourceRecord(zone, wire.TYPE_DS, 0, anchor.ds.pack())
                    if ds_matches_dnskey(ds_rr, keyrr):
                        anchored = True
            if not anchored:
                return bogus()
        else:
            ds_set = rrsets.get((zone, wire.TYPE_DS))
            ds_sig = rrsigs.get((zone, wire.TYPE_DS))
            if ds_set is None or ds_sig is None:
                raise MissingRecords(f"missing DS for zone {zone!r}")
            if not verify_rrsig(ds_set, ds_sig, prev_dnskeys, backend):
                return bogus()
            if not any(ds_matches_dnskey(ds, keyrr)
                       for ds in ds_set for keyrr in dnskeys):
                return bogus()
        if not verify_rrsig(dnskeys, dnskey_sig, dnskeys, backend):
            return bogus()
        prev_dnskeys = dnskeys

    if not verify_rrsig(answer, answer_sig, prev_dnskeys, backend):
        return bogus()
    return SECURE, time.perf_counter() - start
