import random

import pytest

from v2xauth.crypto import signatures


def test_sign_verify_round_trip():
    rng = random.Random(0x60)
    sk, pk = signatures.keygen_sig(rng)
    sig = signatures.sign(sk, b"registration receipt", rng)
    assert len(sig) == signatures.SIG_LEN
    assert signatures.verify(pk, sig, b"registration receipt")


def test_verify_rejects_any_flipped_byte():
    rng = random.Random(0x61)
    sk, pk = signatures.keygen_sig(rng)
    msg = b"m" * 40
    sig = signatures.sign(sk, msg, rng)
    for i in range(len(sig)):
        bad = bytearray(sig)
        bad[i] ^= 0x01
        assert not signatures.verify(pk, bytes(bad), msg)
    for i in range(len(msg)):
        bad_msg = bytearray(msg)
        bad_msg[i] ^= 0x01
        assert not signatures.verify(pk, sig, bytes(bad_msg))


def test_verify_rejects_wrong_key_and_garbage():
    rng = random.Random(0x62)
    sk, pk = signatures.keygen_sig(rng)
    _, other_pk = signatures.keygen_sig(rng)
    sig = signatures.sign(sk, b"msg", rng)
    assert not signatures.verify(other_pk, sig, b"msg")
    assert not signatures.verify(pk, b"", b"msg")
    assert not signatures.verify(pk, bytes(56), b"msg")
    assert not signatures.verify(None, sig, b"msg")


def test_signing_deterministic_under_seed():
    sk, _ = signatures.keygen_sig(random.Random(7))
    sig1 = signatures.sign(sk, b"x", random.Random(99))
    sig2 = signatures.sign(sk, b"x", random.Random(99))
    assert sig1 == sig2


def test_seal_round_trip():
    rng = random.Random(0x63)
    sk, pk = signatures.keygen_enc(rng)
    for size in (0, 1, 33, 400):
        msg = rng.randbytes(size)
        blob = signatures.aenc(pk, msg, rng)
        assert signatures.adec(sk, blob) == msg


def test_seal_tamper_detected():
    rng = random.Random(0x64)
    sk, pk = signatures.keygen_enc(rng)
    blob = bytearray(signatures.aenc(pk, b"identity payload", rng))
    step = max(1, len(blob) // 16)
    for i in range(0, len(blob), step):
        bad = bytearray(blob)
        bad[i] ^= 0x80
        with pytest.raises(signatures.IntegrityError):
            signatures.adec(sk, bytes(bad))


def test_seal_wrong_recipient_fails():
    rng = random.Random(0x65)
    sk1, pk1 = signatures.keygen_enc(rng)
    sk2, _ = signatures.keygen_enc(rng)
    blob = signatures.aenc(pk1, b"secret", rng)
    with pytest.raises(signatures.IntegrityError):
        signatures.adec(sk2, blob)
    assert signatures.adec(sk1, blob) == b"secret"
