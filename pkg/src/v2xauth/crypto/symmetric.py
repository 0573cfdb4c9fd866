"""Symmetric layer: length-preserving keystream cipher and the pseudonym
block permutation.

The protocol's size accounting needs ciphertext length == plaintext
length (a 28-byte nonce must encrypt to a 28-byte field), and every
symmetric key here (D, M, Ks) is used at most once per exchange with a
distinct context label, so a keystream construction with no nonce or
padding is the right fit. Integrity is not this layer's job: the
exchange authenticates via its hash checks, and tampered ciphertext
surfaces as a failed verification upstream.

Pseudo-identities are a single AES-128 block under a subkey derived
from the group secret component b, giving a 16-byte bijection so that
pID reveals nothing and decrypts to exactly one raw pseudonym.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .hashes import TAG_KEYSTREAM, TAG_PID_KDF, encode_preimage, xof_bytes

PID_LEN = 16


def sym_encrypt(key: bytes, plaintext: bytes, context: bytes) -> bytes:
    """XOR with an XOF keystream bound to (key, context). Self-inverse."""
    if not plaintext:
        return b""
    stream = hashlib.shake_256(encode_preimage(TAG_KEYSTREAM, [key, context])).digest(len(plaintext))
    return bytes(a ^ b for a, b in zip(plaintext, stream))


def sym_decrypt(key: bytes, ciphertext: bytes, context: bytes) -> bytes:
    return sym_encrypt(key, ciphertext, context)


def pid_cipher_key(b: int) -> bytes:
    """128-bit AES subkey for the pseudonym permutation, derived from b."""
    return xof_bytes(TAG_PID_KDF, [b], 16)


@lru_cache(maxsize=8)
def _pid_cipher(b: int) -> Cipher:
    # cipher construction dominates a single-block operation; the group
    # secret changes only at rotation, so cache per epoch value
    return Cipher(algorithms.AES(pid_cipher_key(b)), modes.ECB())


def pid_encrypt(b: int, pd: bytes) -> bytes:
    """Encrypt one 16-byte raw pseudonym block into the public pID."""
    if len(pd) != PID_LEN:
        raise ValueError("raw pseudonym must be 16 bytes")
    enc = _pid_cipher(b).encryptor()
    return enc.update(pd) + enc.finalize()


def pid_decrypt(b: int, pid: bytes) -> bytes:
    if len(pid) != PID_LEN:
        raise ValueError("pID must be 16 bytes")
    dec = _pid_cipher(b).decryptor()
    return dec.update(pid) + dec.finalize()
