import hashlib
import hmac

import pytest

from pqcdns import suites
from pqcdns.errors import (
    EmptySecret,
    MalformedCiphertext,
    MalformedKey,
    UnknownAlgorithm,
    WrongKind,
)
from pqcdns.suites import (
    AlgorithmSuite,
    CryptoBackend,
    DeploymentClass,
    Kind,
    algorithm_by_code,
    algorithm_params,
    all_algorithms,
    classify_profile,
    get_algorithm,
    hybrid_combine,
    make_suite,
)

# Artifact sizes pinned from the published parameter sets.
PINNED_SIZES = {
    # name: (public key, secret key, ciphertext or signature)
    "mlkem512": (800, 1632, 768),
    "mlkem768": (1184, 2400, 1088),
    "mlkem1024": (1568, 3168, 1568),
    "hqc128": (2249, 2305, 4433),
    "x25519": (32, 32, 32),
    "x448": (56, 56, 56),
    "mldsa44": (1312, 2560, 2420),
    "mldsa65": (1952, 4032, 3309),
    "mldsa87": (2592, 4896, 4627),
    "falcon512": (897, 1281, 666),
    "falcon1024": (1793, 2305, 1280),
    "sphincssha2128f": (32, 64, 17088),
    "sphincssha2192f": (48, 96, 35664),
    "ed25519": (32, 32, 64),
    "ed448": (57, 57, 114),
}


@pytest.mark.parametrize("name,sizes", sorted(PINNED_SIZES.items()))
def test_pinned_artifact_sizes(name, sizes):
    p = algorithm_params(name)
    assert (p.public_key_bytes, p.secret_key_bytes,
            p.ciphertext_or_signature_bytes) == sizes


def test_hybrid_sizes_are_member_sums():
    h = algorithm_params("x25519mlkem512")
    a = algorithm_params("x25519")
    b = algorithm_params("mlkem512")
    assert h.public_key_bytes == a.public_key_bytes + b.public_key_bytes
    assert h.ciphertext_or_signature_bytes == (
        a.ciphertext_or_signature_bytes + b.ciphertext_or_signature_bytes)
    assert h.shared_secret_bytes == 32


def test_registry_codes_unique_and_resolvable():
    algs = all_algorithms()
    codes = [a.code for a in algs]
    assert len(set(codes)) == len(codes)
    for a in algs:
        assert algorithm_by_code(a.code) == a
        assert get_algorithm(a.name) == a


def test_unknown_algorithm():
    with pytest.raises(UnknownAlgorithm):
        get_algorithm("mlkem9000")
    with pytest.raises(UnknownAlgorithm):
        algorithm_by_code(0xFFFF)


def test_suite_kind_checks():
    with pytest.raises(WrongKind):
        make_suite("mldsa44", "mlkem512")
    with pytest.raises(WrongKind):
        make_suite("mlkem512", "mlkem768")


@pytest.mark.parametrize("kem,sig,expected", [
    ("x25519", "ed25519", DeploymentClass.LEGACY_ONLY),
    ("mlkem512", "mldsa44", DeploymentClass.PQC_ONLY),
    ("mlkem512", "ed25519", DeploymentClass.HYBRID_KEM_LEGACY_SIG),
    ("x25519", "mldsa44", DeploymentClass.HYBRID_LEGACY_KEM_PQC_SIG),
    ("x25519mlkem512", "mldsa44", DeploymentClass.HYBRID_DUAL),
])
def test_classify_profile(kem, sig, expected):
    assert classify_profile(get_algorithm(kem), get_algorithm(sig)) == expected


def test_suite_security_level_is_max():
    assert make_suite("mlkem512", "mldsa87").security_level == 5
    assert make_suite("mlkem1024", "mldsa44").security_level == 5
    assert make_suite("mlkem512", "mldsa44").security_level == 1


# --------------------------------------------------------------------------
# Simulated provider


def _roundtrip_kem(backend, name):
    alg = get_algorithm(name)
    p = algorithm_params(alg)
    pk, sk = backend.kem_keygen(alg)
    assert len(pk) == p.public_key_bytes
    assert len(sk) == p.secret_key_bytes
    ct, ss1 = backend.kem_encapsulate(alg, pk)
    assert len(ct) == p.ciphertext_or_signature_bytes
    assert len(ss1) == p.shared_secret_bytes
    ss2 = backend.kem_decapsulate(alg, sk, ct)
    assert ss1 == ss2


@pytest.mark.parametrize("name", sorted(
    a.name for a in all_algorithms(Kind.KEM)))
def test_simulated_kem_correctness(backend, name):
    _roundtrip_kem(backend, name)


@pytest.mark.parametrize("name", sorted(
    a.name for a in all_algorithms(Kind.SIGNATURE)))
def test_simulated_signature_roundtrip(backend, name):
    alg = get_algorithm(name)
    p = algorithm_params(alg)
    pk, sk = backend.sig_keygen(alg)
    msg = b"the quick brown fox"
    sig = backend.sign(alg, sk, msg)
    assert len(sig) == p.ciphertext_or_signature_bytes
    assert backend.verify(alg, pk, msg, sig)
    assert not backend.verify(alg, pk, msg + b"!", sig)
    assert not backend.verify(alg, pk, msg, sig[:-1] + bytes([sig[-1] ^ 1]))


def test_kem_wrong_size_inputs(backend):
    alg = get_algorithm("mlkem512")
    pk, sk = backend.kem_keygen(alg)
    with pytest.raises(MalformedKey):
        backend.kem_encapsulate(alg, pk[:-1])
    ct, _ = backend.kem_encapsulate(alg, pk)
    with pytest.raises(MalformedCiphertext):
        backend.kem_decapsulate(alg, sk, ct[:-1])
    with pytest.raises(MalformedKey):
        backend.kem_decapsulate(alg, sk[:-1], ct)


def test_implicit_rejection_differs_for_tampered_ciphertext(backend):
    alg = get_algorithm("mlkem512")
    pk, sk = backend.kem_keygen(alg)
    ct, ss = backend.kem_encapsulate(alg, pk)
    bad = ct[:-1] + bytes([ct[-1] ^ 1])
    other = backend.kem_decapsulate(alg, sk, bad)
    assert other != ss
    assert len(other) == len(ss)


def test_deterministic_with_seed():
    b1 = CryptoBackend("simulated", seed=9)
    b2 = CryptoBackend("simulated", seed=9)
    alg = get_algorithm("mlkem768")
    assert b1.kem_keygen(alg) == b2.kem_keygen(alg)


def test_hybrid_combine_oracle():
    # Independent recomputation: HMAC-SHA256 extract over the
    # length-prefixed concatenation, then a labeled expand.
    a, b = b"A" * 32, b"B" * 32
    ikm = len(a).to_bytes(2, "big") + a + b
    prk = hmac.new(b"pqcdns hybrid v1", ikm, hashlib.sha256).digest()
    expected = hmac.new(prk, b"combined", hashlib.sha256).digest()[:32]
    assert hybrid_combine(a, b) == expected
    assert hybrid_combine(b, a) != expected  # order-sensitive
    with pytest.raises(EmptySecret):
        hybrid_combine(b"", b)


def test_hybrid_kem_uses_both_members(backend):
    alg = get_algorithm("x25519mlkem512")
    pk, sk = backend.kem_keygen(alg)
    ct, ss = backend.kem_encapsulate(alg, pk)
    assert len(ss) == 32
    assert backend.kem_decapsulate(alg, sk, ct) == ss
    # Tampering with either half changes the combined secret.
    for cut in (10, 40):  # inside classical half, inside pq half
        bad = ct[:cut] + bytes([ct[cut] ^ 1]) + ct[cut + 1:]
        assert backend.kem_decapsulate(alg, sk, bad) != ss


# --------------------------------------------------------------------------
# Real provider (elliptic-curve algorithms)


@pytest.mark.parametrize("name", ["x25519", "x448", "secp256r1"])
def test_real_kem_roundtrip(name):
    _roundtrip_kem(CryptoBackend("real"), name)


@pytest.mark.parametrize("name", ["ed25519", "ed448", "ecdsa-p256"])
def test_real_signature_roundtrip(name):
    backend = CryptoBackend("real")
    alg = get_algorithm(name)
    p = algorithm_params(alg)
    pk, sk = backend.sig_keygen(alg)
    sig = backend.sign(alg, sk, b"msg")
    if p.fixed_size:
        assert len(sig) == p.ciphertext_or_signature_bytes
    else:
        assert len(sig) <= p.ciphertext_or_signature_bytes
    assert backend.verify(alg, pk, b"msg", sig)
    assert not backend.verify(alg, pk, b"other", sig)


def test_real_provider_falls_back_for_pqc():
    backend = CryptoBackend("real", seed=5)
    _roundtrip_kem(backend, "mlkem512")


def test_verify_counter(backend):
    alg = get_algorithm("ed25519")
    pk, sk = backend.sig_keygen(alg)
    sig = backend.sign(alg, sk, b"x")
    before = backend.verify_calls
    backend.verify(alg, pk, b"x", sig)
    backend.verify(alg, pk, b"y", sig)
    assert backend.verify_calls == before + 2
