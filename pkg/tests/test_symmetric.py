import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from v2xauth.crypto import symmetric


@settings(max_examples=60, deadline=None)
@given(st.binary(min_size=0, max_size=4096), st.binary(min_size=20, max_size=20))
def test_round_trip(plaintext, key):
    ct = symmetric.sym_encrypt(key, plaintext, b"ctx")
    assert len(ct) == len(plaintext)
    assert symmetric.sym_decrypt(key, ct, b"ctx") == plaintext


def test_round_trip_every_length_through_4096():
    rng = random.Random(0x51)
    key = rng.randbytes(20)
    for n in range(0, 4097):
        pt = rng.randbytes(n)
        ct = symmetric.sym_encrypt(key, pt, b"len")
        assert len(ct) == n
        assert symmetric.sym_decrypt(key, ct, b"len") == pt


def test_nonce_field_width_is_preserved():
    # a 28-byte nonce must encrypt to exactly the 28-byte wire slot
    key = bytes(20)
    assert len(symmetric.sym_encrypt(key, bytes(28), b"S1")) == 28


def test_distinct_keys_distinct_ciphertexts():
    rng = random.Random(0x52)
    pt = rng.randbytes(64)
    seen = set()
    for _ in range(200):
        seen.add(symmetric.sym_encrypt(rng.randbytes(20), pt, b"ctx"))
    assert len(seen) == 200


def test_context_separates_streams():
    key = b"k" * 20
    pt = b"p" * 32
    assert symmetric.sym_encrypt(key, pt, b"a") != symmetric.sym_encrypt(key, pt, b"b")


def test_pid_round_trip_and_length():
    rng = random.Random(0x53)
    for _ in range(50):
        b = rng.randrange(1, 2**224)
        pd = rng.randbytes(16)
        pid = symmetric.pid_encrypt(b, pd)
        assert len(pid) == 16
        assert symmetric.pid_decrypt(b, pid) == pd


def test_pid_injective():
    rng = random.Random(0x54)
    b = rng.randrange(1, 2**224)
    pds = {rng.randbytes(16) for _ in range(64)}
    pids = {symmetric.pid_encrypt(b, pd) for pd in pds}
    assert len(pids) == len(pds)


def test_pid_rejects_wrong_width():
    with pytest.raises(ValueError):
        symmetric.pid_encrypt(1, b"short")
    with pytest.raises(ValueError):
        symmetric.pid_decrypt(1, bytes(17))
