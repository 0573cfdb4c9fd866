"""Domain-separated hash family built on one extendable-output function.

Every keyed derivation in the protocol funnels through SHAKE-256 with a
one-byte domain tag followed by the arguments, each length-prefixed, so
no two call sites can ever collide on their encoded input. Tags 0-6 are
the published protocol hashes; higher tags are internal derivations
(pseudo-identity cipher subkey, symmetric keystream, hybrid-encryption
KDF/MAC, signature digest).

Output kinds:

* scalar hashes (h0, h2) produce an element of Z_q*, obtained by
  rejection-sampling 28-byte windows of the XOF stream;
* string hashes (h1, h3..h6) produce 20-byte tags (the security
  parameter, 160 bits).

Arguments are passed as Python values and serialized canonically:
``int`` scalars as 28-byte big-endian, points in 29-byte compressed
form, ``bytes`` verbatim. Timestamps travel as ints and are encoded as
4-byte big-endian words.
"""

from __future__ import annotations

import hashlib

from .curve import Q, SCALAR_BYTES, point_compress

TAG_LEN = 20  # 160-bit outputs

# published family
TAG_H0 = 0
TAG_H1 = 1
TAG_H2 = 2
TAG_H3 = 3
TAG_H4 = 4
TAG_H5 = 5
TAG_H6 = 6
# internal derivations
TAG_PID_KDF = 7
TAG_KEYSTREAM = 8
TAG_HYBRID_KDF = 9
TAG_SIG_DIGEST = 10

# tag -> (name, arity, output kind) for the published family
HASH_FAMILY = {
    TAG_H0: ("h0", 2, "scalar"),
    TAG_H1: ("h1", 4, "tag"),
    TAG_H2: ("h2", 7, "scalar"),
    TAG_H3: ("h3", 4, "tag"),
    TAG_H4: ("h4", 3, "tag"),
    TAG_H5: ("h5", 7, "tag"),
    TAG_H6: ("h6", 4, "tag"),
}


def _encode_arg(arg) -> bytes:
    if isinstance(arg, (bytes, bytearray)):
        raw = bytes(arg)
    elif isinstance(arg, int):
        raw = arg.to_bytes(SCALAR_BYTES, "big")
    elif arg is None or isinstance(arg, tuple):
        raw = point_compress(arg)
    else:
        raise TypeError(f"unhashable protocol argument: {type(arg)!r}")
    return len(raw).to_bytes(4, "big") + raw


def encode_preimage(tag: int, args) -> bytes:
    """Tag byte plus length-prefixed arguments; injective across tags."""
    return bytes([tag]) + b"".join(_encode_arg(a) for a in args)


def xof_bytes(tag: int, args, n: int) -> bytes:
    return hashlib.shake_256(encode_preimage(tag, args)).digest(n)


def hash_to_scalar(tag: int, args) -> int:
    """Element of Z_q* via rejection sampling over the XOF stream.

    q is within 2^-112 of 2^224, so the first window is accepted except
    with negligible probability; the counter re-seed is a formality.
    """
    pre = encode_preimage(tag, args)
    counter = 0
    while True:
        stream = hashlib.shake_256(pre + counter.to_bytes(4, "big")).digest(SCALAR_BYTES * 8)
        for i in range(0, len(stream), SCALAR_BYTES):
            v = int.from_bytes(stream[i : i + SCALAR_BYTES], "big")
            if 0 < v < Q:
                return v
        counter += 1


def _ts(t: int) -> bytes:
    return (t & 0xFFFFFFFF).to_bytes(4, "big")


def h0(identity: bytes, s: int) -> int:
    """Registration nonce->scalar hash: derives the initial hash randomizer."""
    return hash_to_scalar(TAG_H0, [identity, s])


def h1(pd: bytes, gk: int, b: int, pid: bytes) -> bytes:
    """Per-vehicle symmetric key from the raw pseudonym and group secret."""
    return xof_bytes(TAG_H1, [pd, gk, b, pid], TAG_LEN)


def h2(pid: bytes, beta: int, a_pt, s1: bytes, d: bytes, rsu_pk, t1: int) -> int:
    """Challenge scalar binding the whole request to the target verifier key."""
    return hash_to_scalar(TAG_H2, [pid, beta, a_pt, s1, d, rsu_pk, _ts(t1)])


def h3(ch, d: bytes, beta: int, t1: int) -> bytes:
    """Shared secret M: commitment point, current key and the vehicle nonce."""
    return xof_bytes(TAG_H3, [ch, d, beta, _ts(t1)], TAG_LEN)


def h4(beta_rsu: int, m_secret: bytes, t2: int) -> bytes:
    """Session key derivation."""
    return xof_bytes(TAG_H4, [beta_rsu, m_secret, _ts(t2)], TAG_LEN)


def h5(s2: bytes, beta_rsu: int, pid_new: bytes, d_new: bytes, m_secret: bytes, ks: bytes, t2: int) -> bytes:
    """Verifier-side key-confirmation tag."""
    return xof_bytes(TAG_H5, [s2, beta_rsu, pid_new, d_new, m_secret, ks, _ts(t2)], TAG_LEN)


def h6(m_secret: bytes, ks: bytes, req: bytes, rep: bytes) -> bytes:
    """Final acknowledgement over the whole transcript."""
    return xof_bytes(TAG_H6, [m_secret, ks, req, rep], TAG_LEN)
