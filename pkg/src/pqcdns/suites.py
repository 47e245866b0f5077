"""Algorithm registry and KEM/signature providers.

Every algorithm that appears in the benchmark grid is registered here with
pinned artifact sizes.  Two provider backends exist:

* ``simulated`` -- deterministic stand-in that emits correctly sized
  pseudorandom artifacts and verifies by recomputation.  Byte accounting is
  exact and no real cryptography is involved.
* ``real`` -- classical algorithms backed by the ``cryptography`` package
  (X25519/X448, ECDH, Ed25519/Ed448, ECDSA).  Algorithms without a real
  binding fall back to the simulated provider.

Sizes for the post-quantum schemes are the published parameter-set values
(FIPS 203/204/205, Falcon padded form, HQC round-4 reference).
"""

from __future__ import annotations

import enum
import hashlib
import hmac
import os
import struct
import threading
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric import ec, ed448, ed25519, x448, x25519
from cryptography.hazmat.primitives import hashes, serialization

from .errors import (
    EmptySecret,
    MalformedCiphertext,
    MalformedKey,
    UnknownAlgorithm,
    WrongKind,
)


class Kind(enum.Enum):
    KEM = "kem"
    SIGNATURE = "signature"


class Family(enum.Enum):
    LATTICE = "lattice"
    HASH = "hash"
    CODE = "code"
    FINITE_FIELD = "finite-field"
    ELLIPTIC_CURVE = "elliptic-curve"
    RSA = "rsa"


class DeploymentClass(enum.Enum):
    LEGACY_ONLY = "legacy-only"
    PQC_ONLY = "pqc-only"
    HYBRID_KEM_LEGACY_SIG = "hybrid-pqc-kem-legacy-sig"
    HYBRID_LEGACY_KEM_PQC_SIG = "hybrid-legacy-kem-pqc-sig"
    HYBRID_DUAL = "hybrid-dual"


@dataclass(frozen=True)
class AlgorithmId:
    name: str
    kind: Kind
    family: Family
    security_level: int
    post_quantum: bool
    # Hybrid ids carry both a classical and a post-quantum component.
    hybrid: bool = False
    # Stable 2-byte code used on the wire instead of the name.
    code: int = 0

    @property
    def classical(self) -> bool:
        return not self.post_quantum or self.hybrid


@dataclass(frozen=True)
class AlgorithmParams:
    public_key_bytes: int
    secret_key_bytes: int
    ciphertext_or_signature_bytes: int
    shared_secret_bytes: int = 0
    # False for schemes whose real encoding varies in length (DER ECDSA,
    # unpadded Falcon); the size above is then an upper bound.
    fixed_size: bool = True


# DNSKEY/RRSIG algorithm numbers.  Legacy schemes use their IANA codes; the
# post-quantum schemes have no assignment yet and occupy the 240-248
# private-use block declared here.
DNSSEC_ALG_NUMBERS = {
    "rsa2048sha256": 8,
    "ecdsap256sha256": 13,
    "ecdsa-p256": 13,
    "ecdsa-p384": 14,
    "ed25519": 15,
    "ed448": 16,
    "mldsa44": 240,
    "mldsa65": 241,
    "mldsa87": 242,
    "falcon512": 243,
    "falconpadded512": 244,
    "falcon1024": 245,
    "sphincssha2128f": 246,
    "sphincssha2192f": 247,
    "sphincssha2128fsimple": 248,
}


_REGISTRY: dict[str, tuple[AlgorithmId, AlgorithmParams]] = {}

# name -> (classical member, pq member) for hybrid KEM ids
_HYBRID_MEMBERS: dict[str, tuple[str, str]] = {}

HYBRID_SECRET_BYTES = 32


def _reg(name, kind, family, level, pq, pk, sk, ct, ss=0, fixed=True, hybrid=False):
    code = len(_REGISTRY) + 1
    alg = AlgorithmId(name, kind, family, level, pq, hybrid, code)
    _REGISTRY[name] = (alg, AlgorithmParams(pk, sk, ct, ss, fixed))
    return alg


# --- KEMs (public key, secret key, ciphertext, shared secret) ---
_reg("x25519", Kind.KEM, Family.ELLIPTIC_CURVE, 1, False, 32, 32, 32, 32)
_reg("x448", Kind.KEM, Family.ELLIPTIC_CURVE, 5, False, 56, 56, 56, 56)
_reg("secp256r1", Kind.KEM, Family.ELLIPTIC_CURVE, 1, False, 65, 32, 65, 32)
_reg("secp384r1", Kind.KEM, Family.ELLIPTIC_CURVE, 3, False, 97, 48, 97, 48)
_reg("secp521r1", Kind.KEM, Family.ELLIPTIC_CURVE, 5, False, 133, 66, 133, 66)
_reg("ffdhe2048", Kind.KEM, Family.FINITE_FIELD, 1, False, 256, 32, 256, 256)
_reg("ffdhe3072", Kind.KEM, Family.FINITE_FIELD, 3, False, 384, 32, 384, 384)
_reg("ffdhe4096", Kind.KEM, Family.FINITE_FIELD, 5, False, 512, 32, 512, 512)
_reg("mlkem512", Kind.KEM, Family.LATTICE, 1, True, 800, 1632, 768, 32)
_reg("mlkem768", Kind.KEM, Family.LATTICE, 3, True, 1184, 2400, 1088, 32)
_reg("mlkem1024", Kind.KEM, Family.LATTICE, 5, True, 1568, 3168, 1568, 32)
_reg("hqc128", Kind.KEM, Family.CODE, 1, True, 2249, 2305, 4433, 64)
_reg("hqc192", Kind.KEM, Family.CODE, 3, True, 4522, 4586, 8978, 64)
_reg("hqc256", Kind.KEM, Family.CODE, 5, True, 7245, 7317, 14421, 64)

# Hybrid group: both shares travel together, secrets are merged by
# hybrid_combine.  Sizes are the member sums.
_reg("x25519mlkem512", Kind.KEM, Family.LATTICE, 1, True,
     32 + 800, 32 + 1632, 32 + 768, HYBRID_SECRET_BYTES, hybrid=True)
_HYBRID_MEMBERS["x25519mlkem512"] = ("x25519", "mlkem512")

# --- Signatures (public key, secret key, signature) ---
_reg("ed25519", Kind.SIGNATURE, Family.ELLIPTIC_CURVE, 1, False, 32, 32, 64)
_reg("ed448", Kind.SIGNATURE, Family.ELLIPTIC_CURVE, 5, False, 57, 57, 114)
_reg("ecdsa-p256", Kind.SIGNATURE, Family.ELLIPTIC_CURVE, 1, False, 65, 32, 72, fixed=False)
_reg("ecdsa-p384", Kind.SIGNATURE, Family.ELLIPTIC_CURVE, 3, False, 97, 48, 104, fixed=False)
_reg("ecdsa-p521", Kind.SIGNATURE, Family.ELLIPTIC_CURVE, 5, False, 133, 66, 139, fixed=False)
_reg("rsa2048", Kind.SIGNATURE, Family.RSA, 1, False, 270, 1190, 256)
_reg("rsa3072", Kind.SIGNATURE, Family.RSA, 3, False, 398, 1768, 384)
_reg("rsa4096", Kind.SIGNATURE, Family.RSA, 5, False, 526, 2348, 512)
_reg("mldsa44", Kind.SIGNATURE, Family.LATTICE, 1, True, 1312, 2560, 2420)
_reg("mldsa65", Kind.SIGNATURE, Family.LATTICE, 3, True, 1952, 4032, 3309)
_reg("mldsa87", Kind.SIGNATURE, Family.LATTICE, 5, True, 2592, 4896, 4627)
_reg("falcon512", Kind.SIGNATURE, Family.LATTICE, 1, True, 897, 1281, 666, fixed=False)
_reg("falcon1024", Kind.SIGNATURE, Family.LATTICE, 5, True, 1793, 2305, 1280, fixed=False)
_reg("falconpadded512", Kind.SIGNATURE, Family.LATTICE, 1, True, 897, 1281, 666)
_reg("sphincssha2128f", Kind.SIGNATURE, Family.HASH, 1, True, 32, 64, 17088)
_reg("sphincssha2192f", Kind.SIGNATURE, Family.HASH, 3, True, 48, 96, 35664)
_reg("sphincssha2128fsimple", Kind.SIGNATURE, Family.HASH, 1, True, 32, 64, 17088)
# DNSSEC-table spellings kept as distinct ids (same parameter sets).
_reg("rsa2048sha256", Kind.SIGNATURE, Family.RSA, 1, False, 270, 1190, 256)
_reg("ecdsap256sha256", Kind.SIGNATURE, Family.ELLIPTIC_CURVE, 1, False, 65, 32, 64)

_BY_CODE = {alg.code: alg for alg, _ in _REGISTRY.values()}


def get_algorithm(name: str) -> AlgorithmId:
    try:
        return _REGISTRY[name][0]
    except KeyError:
        raise UnknownAlgorithm(f"unknown algorithm: {name!r}") from None


def algorithm_by_code(code: int) -> AlgorithmId:
    try:
        return _BY_CODE[code]
    except KeyError:
        raise UnknownAlgorithm(f"unknown algorithm code: {code}") from None


def algorithm_params(alg: AlgorithmId | str) -> AlgorithmParams:
    name = alg.name if isinstance(alg, AlgorithmId) else alg
    try:
        return _REGISTRY[name][1]
    except KeyError:
        raise UnknownAlgorithm(f"unknown algorithm: {name!r}") from None


def all_algorithms(kind: Kind | None = None) -> list[AlgorithmId]:
    algs = [alg for alg, _ in _REGISTRY.values()]
    if kind is not None:
        algs = [a for a in algs if a.kind == kind]
    return algs


def registry_table() -> str:
    """Human-readable registry dump (name, kind, family, level, sizes)."""
    rows = [("name", "kind", "family", "level", "pk", "sk", "ct/sig", "ss")]
    for alg, p in _REGISTRY.values():
        rows.append((alg.name, alg.kind.value, alg.family.value,
                     str(alg.security_level), str(p.public_key_bytes),
                     str(p.secret_key_bytes), str(p.ciphertext_or_signature_bytes),
                     str(p.shared_secret_bytes)))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


@dataclass(frozen=True)
class AlgorithmSuite:
    kem: AlgorithmId
    sig: AlgorithmId
    dnssec_sig: AlgorithmId | None = None

    def __post_init__(self):
        if self.kem.kind != Kind.KEM:
            raise WrongKind(f"{self.kem.name} is not a KEM")
        if self.sig.kind != Kind.SIGNATURE:
            raise WrongKind(f"{self.sig.name} is not a signature scheme")
        if self.dnssec_sig is not None and self.dnssec_sig.kind != Kind.SIGNATURE:
            raise WrongKind(f"{self.dnssec_sig.name} is not a signature scheme")

    @property
    def deployment_class(self) -> DeploymentClass:
        return classify_profile(self.kem, self.sig)

    @property
    def security_level(self) -> int:
        return max(self.kem.security_level, self.sig.security_level)

    def label(self) -> str:
        parts = [self.kem.name, self.sig.name]
        if self.dnssec_sig is not None:
            parts.append(self.dnssec_sig.name)
        return "+".join(parts)


def make_suite(kem: str, sig: str, dnssec_sig: str | None = None) -> AlgorithmSuite:
    return AlgorithmSuite(
        get_algorithm(kem), get_algorithm(sig),
        get_algorithm(dnssec_sig) if dnssec_sig else None)


def classify_profile(kem: AlgorithmId, sig: AlgorithmId) -> DeploymentClass:
    if kem.hybrid or sig.hybrid:
        return DeploymentClass.HYBRID_DUAL
    if kem.post_quantum and sig.post_quantum:
        return DeploymentClass.PQC_ONLY
    if not kem.post_quantum and not sig.post_quantum:
        return DeploymentClass.LEGACY_ONLY
    if kem.post_quantum:
        return DeploymentClass.HYBRID_KEM_LEGACY_SIG
    return DeploymentClass.HYBRID_LEGACY_KEM_PQC_SIG


def hybrid_combine(secret_a: bytes, secret_b: bytes) -> bytes:
    """Merge two shared secrets into one fixed-width key.

    Extract-then-expand over the ordered concatenation with a domain
    separation label, so the result depends on the order of the inputs.
    """
    if not secret_a or not secret_b:
        raise EmptySecret("hybrid_combine requires two non-empty secrets")
    ikm = struct.pack(">H", len(secret_a)) + secret_a + secret_b
    prk = hmac.new(b"pqcdns hybrid v1", ikm, hashlib.sha256).digest()
    return hmac.new(prk, b"combined", hashlib.sha256).digest()[:HYBRID_SECRET_BYTES]


# --------------------------------------------------------------------------
# Providers


def _stream(label: bytes, data: bytes, n: int) -> bytes:
    out = b""
    counter = 0
    while len(out) < n:
        out += hashlib.sha256(label + struct.pack(">I", counter) + data).digest()
        counter += 1
    return out[:n]


class CryptoBackend:
    """Dispatches KEM and signature operations to a provider.

    ``provider`` is ``"simulated"`` or ``"real"``.  The real provider covers
    the elliptic-curve algorithms; everything else (PQC schemes, RSA, FFDHE)
    runs on the simulated provider in either mode.  All operations are pure
    given their inputs; the verify counter is the only mutable state and is
    lock-protected.
    """

    def __init__(self, provider: str = "simulated", seed: int | None = None):
        if provider not in ("simulated", "real"):
            raise ValueError(f"unknown provider class: {provider!r}")
        self.provider = provider
        self._lock = threading.Lock()
        self._verify_calls = 0
        self._seed_lock = threading.Lock()
        self._seed_counter = 0
        self._seed = seed

    # Deterministic entropy when seeded, os.urandom otherwise.
    def _random(self, n: int) -> bytes:
        if self._seed is None:
            return os.urandom(n)
        with self._seed_lock:
            self._seed_counter += 1
            c = self._seed_counter
        return _stream(b"rng", struct.pack(">QQ", self._seed, c), n)

    @property
    def verify_calls(self) -> int:
        with self._lock:
            return self._verify_calls

    def _count_verify(self):
        with self._lock:
            self._verify_calls += 1

    def _use_real(self, alg: AlgorithmId) -> bool:
        return (self.provider == "real"
                and alg.family == Family.ELLIPTIC_CURVE
                and not alg.post_quantum)

    # --- KEM ---

    def kem_keygen(self, alg: AlgorithmId) -> tuple[bytes, bytes]:
        if alg.kind != Kind.KEM:
            raise WrongKind(f"{alg.name} is not a KEM")
        if alg.hybrid:
            a, b = (get_algorithm(n) for n in _HYBRID_MEMBERS[alg.name])
            pka, ska = self.kem_keygen(a)
            pkb, skb = self.kem_keygen(b)
            return pka + pkb, ska + skb
        if self._use_real(alg):
            return _real_kem_keygen(alg)
        p = algorithm_params(alg)
        seed = self._random(32)
        sk = (seed + _stream(b"kem-skpad", alg.name.encode() + seed,
                             p.secret_key_bytes))[:p.secret_key_bytes]
        pk = _stream(b"kem-pk", alg.name.encode() + seed, p.public_key_bytes)
        return pk, sk

    def kem_encapsulate(self, alg: AlgorithmId, pk: bytes) -> tuple[bytes, bytes]:
        if alg.kind != Kind.KEM:
            raise WrongKind(f"{alg.name} is not a KEM")
        p = algorithm_params(alg)
        if len(pk) != p.public_key_bytes:
            raise MalformedKey(
                f"{alg.name}: public key is {len(pk)} bytes, expected {p.public_key_bytes}")
        if alg.hybrid:
            a, b = (get_algorithm(n) for n in _HYBRID_MEMBERS[alg.name])
            na = algorithm_params(a).public_key_bytes
            cta, ssa = self.kem_encapsulate(a, pk[:na])
            ctb, ssb = self.kem_encapsulate(b, pk[na:])
            return cta + ctb, hybrid_combine(ssa, ssb)
        if self._use_real(alg):
            return _real_kem_encapsulate(alg, pk)
        ct = self._random(p.ciphertext_or_signature_bytes)
        ss = _stream(b"kem-ss", alg.name.encode() + pk + ct, p.shared_secret_bytes)
        return ct, ss

    def kem_decapsulate(self, alg: AlgorithmId, sk: bytes, ct: bytes) -> bytes:
        if alg.kind != Kind.KEM:
            raise WrongKind(f"{alg.name} is not a KEM")
        p = algorithm_params(alg)
        if len(sk) != p.secret_key_bytes:
            raise MalformedKey(
                f"{alg.name}: secret key is {len(sk)} bytes, expected {p.secret_key_bytes}")
        if len(ct) != p.ciphertext_or_signature_bytes:
            raise MalformedCiphertext(
                f"{alg.name}: ciphertext is {len(ct)} bytes, "
                f"expected {p.ciphertext_or_signature_bytes}")
        if alg.hybrid:
            a, b = (get_algorithm(n) for n in _HYBRID_MEMBERS[alg.name])
            pa, pb = algorithm_params(a), algorithm_params(b)
            ssa = self.kem_decapsulate(a, sk[:pa.secret_key_bytes],
                                       ct[:pa.ciphertext_or_signature_bytes])
            ssb = self.kem_decapsulate(b, sk[pa.secret_key_bytes:],
                                       ct[pa.ciphertext_or_signature_bytes:])
            return hybrid_combine(ssa, ssb)
        if self._use_real(alg):
            return _real_kem_decapsulate(alg, sk, ct)
        # Implicit rejection style: any well-sized ciphertext decapsulates to
        # the secret bound to (pk, ct), so a flipped bit yields a different
        # secret rather than an error.
        seed = sk[:32]
        pk = _stream(b"kem-pk", alg.name.encode() + seed, p.public_key_bytes)
        return _stream(b"kem-ss", alg.name.encode() + pk + ct, p.shared_secret_bytes)

    # --- Signatures ---

    def sig_keygen(self, alg: AlgorithmId) -> tuple[bytes, bytes]:
        if alg.kind != Kind.SIGNATURE:
            raise WrongKind(f"{alg.name} is not a signature scheme")
        if self._use_real(alg):
            return _real_sig_keygen(alg)
        p = algorithm_params(alg)
        seed = self._random(32)
        sk = (seed + _stream(b"sig-skpad", alg.name.encode() + seed,
                             p.secret_key_bytes))[:p.secret_key_bytes]
        pk = _stream(b"sig-pk", alg.name.encode() + seed, p.public_key_bytes)
        return pk, sk

    def sign(self, alg: AlgorithmId, sk: bytes, msg: bytes) -> bytes:
        if alg.kind != Kind.SIGNATURE:
            raise WrongKind(f"{alg.name} is not a signature scheme")
        if self._use_real(alg):
            return _real_sign(alg, sk, msg)
        p = algorithm_params(alg)
        if len(sk) != p.secret_key_bytes:
            raise MalformedKey(
                f"{alg.name}: secret key is {len(sk)} bytes, expected {p.secret_key_bytes}")
        seed = sk[:32]
        pk = _stream(b"sig-pk", alg.name.encode() + seed, p.public_key_bytes)
        return _stream(b"sig", alg.name.encode() + pk + msg,
                       p.ciphertext_or_signature_bytes)

    def verify(self, alg: AlgorithmId, pk: bytes, msg: bytes, sig: bytes) -> bool:
        if alg.kind != Kind.SIGNATURE:
            raise WrongKind(f"{alg.name} is not a signature scheme")
        self._count_verify()
        if self._use_real(alg):
            return _real_verify(alg, pk, msg, sig)
        p = algorithm_params(alg)
        if len(pk) != p.public_key_bytes or len(sig) != p.ciphertext_or_signature_bytes:
            return False
        expected = _stream(b"sig", alg.name.encode() + pk + msg,
                           p.ciphertext_or_signature_bytes)
        return hmac.compare_digest(sig, expected)


# Module-level default backend; benchmarks construct their own.
DEFAULT_BACKEND = CryptoBackend("simulated")


# --------------------------------------------------------------------------
# Real classical provider (cryptography package)

_EC_CURVES = {
    "secp256r1": ec.SECP256R1, "secp384r1": ec.SECP384R1, "secp521r1": ec.SECP521R1,
    "ecdsa-p256": ec.SECP256R1, "ecdsa-p384": ec.SECP384R1, "ecdsa-p521": ec.SECP521R1,
}
_EC_HASHES = {
    "ecdsa-p256": hashes.SHA256, "ecdsa-p384": hashes.SHA384, "ecdsa-p521": hashes.SHA512,
}


def _raw_private(key) -> bytes:
    return key.private_bytes(
        serialization.Encoding.Raw, serialization.PrivateFormat.Raw,
        serialization.NoEncryption())


def _raw_public(key) -> bytes:
    return key.public_bytes(serialization.Encoding.Raw,
                            serialization.PublicFormat.Raw)


def _ec_scalar_bytes(alg: AlgorithmId) -> int:
    return algorithm_params(alg).secret_key_bytes


def _real_kem_keygen(alg):
    if alg.name == "x25519":
        sk = x25519.X25519PrivateKey.generate()
        return _raw_public(sk.public_key()), _raw_private(sk)
    if alg.name == "x448":
        sk = x448.X448PrivateKey.generate()
        return _raw_public(sk.public_key()), _raw_private(sk)
    curve = _EC_CURVES[alg.name]()
    sk = ec.generate_private_key(curve)
    pk = sk.public_key().public_bytes(serialization.Encoding.X962,
                                      serialization.PublicFormat.UncompressedPoint)
    n = _ec_scalar_bytes(alg)
    return pk, sk.private_numbers().private_value.to_bytes(n, "big")


def _real_kem_encapsulate(alg, pk):
    # DH-as-KEM: the ciphertext is an ephemeral public key.
    try:
        if alg.name == "x25519":
            peer = x25519.X25519PublicKey.from_public_bytes(pk)
            eph = x25519.X25519PrivateKey.generate()
        elif alg.name == "x448":
            peer = x448.X448PublicKey.from_public_bytes(pk)
            eph = x448.X448PrivateKey.generate()
        else:
            curve = _EC_CURVES[alg.name]()
            peer = ec.EllipticCurvePublicKey.from_encoded_point(curve, pk)
            eph = ec.generate_private_key(curve)
            ct = eph.public_key().public_bytes(
                serialization.Encoding.X962, serialization.PublicFormat.UncompressedPoint)
            return ct, eph.exchange(ec.ECDH(), peer)
        return _raw_public(eph.public_key()), eph.exchange(peer)
    except ValueError as exc:
        raise MalformedKey(str(exc)) from exc


def _real_kem_decapsulate(alg, sk, ct):
    try:
        if alg.name == "x25519":
            key = x25519.X25519PrivateKey.from_private_bytes(sk)
            return key.exchange(x25519.X25519PublicKey.from_public_bytes(ct))
        if alg.name == "x448":
            key = x448.X448PrivateKey.from_private_bytes(sk)
            return key.exchange(x448.X448PublicKey.from_public_bytes(ct))
        curve = _EC_CURVES[alg.name]()
        key = ec.derive_private_key(int.from_bytes(sk, "big"), curve)
        peer = ec.EllipticCurvePublicKey.from_encoded_point(curve, ct)
        return key.exchange(ec.ECDH(), peer)
    except ValueError as exc:
        raise MalformedCiphertext(str(exc)) from exc


def _real_sig_keygen(alg):
    if alg.name == "ed25519":
        sk = ed25519.Ed25519PrivateKey.generate()
        return _raw_public(sk.public_key()), _raw_private(sk)
    if alg.name == "ed448":
        sk = ed448.Ed448PrivateKey.generate()
        return _raw_public(sk.public_key()), _raw_private(sk)
    curve = _EC_CURVES[alg.name]()
    sk = ec.generate_private_key(curve)
    pk = sk.public_key().public_bytes(serialization.Encoding.X962,
                                      serialization.PublicFormat.UncompressedPoint)
    n = _ec_scalar_bytes(alg)
    return pk, sk.private_numbers().private_value.to_bytes(n, "big")


def _real_sign(alg, sk, msg):
    if alg.name == "ed25519":
        return ed25519.Ed25519PrivateKey.from_private_bytes(sk).sign(msg)
    if alg.name == "ed448":
        return ed448.Ed448PrivateKey.from_private_bytes(sk).sign(msg)
    curve = _EC_CURVES[alg.name]()
    key = ec.derive_private_key(int.from_bytes(sk, "big"), curve)
    return key.sign(msg, ec.ECDSA(_EC_HASHES[alg.name]()))


def _real_verify(alg, pk, msg, sig):
    try:
        if alg.name == "ed25519":
            ed25519.Ed25519PublicKey.from_public_bytes(pk).verify(sig, msg)
        elif alg.name == "ed448":
            ed448.Ed448PublicKey.from_public_bytes(pk).verify(sig, msg)
        else:
            curve = _EC_CURVES[alg.name]()
            key = ec.EllipticCurvePublicKey.from_encoded_point(curve, pk)
            key.verify(sig, msg, ec.ECDSA(_EC_HASHES[alg.name]()))
        return True
    except (InvalidSignature, ValueError):
        return False
