"""Bit-exact wire formats for every protocol message.

The three handover messages are fixed-size and their byte budgets are
normative: request 104, reply 88, acknowledgement 20, total 212. Field
order on the wire follows the order the messages are written in the
exchange; all integers are big-endian.

Curve points on the wire are 28 bytes: the x-coordinate alone, with the
convention that the encoded point is the even-y representative. Senders
guarantee canonical form by construction (the blinding exponent is
resampled until the blinded point lands on even y), so no sign byte is
spent. Timestamps are 4-byte milliseconds modulo 2^32 of harness time;
freshness comparisons are wraparound-aware.

Decoding is total: any malformed buffer maps to a typed ``WireError``,
never an unhandled exception.
"""

from __future__ import annotations

from dataclasses import dataclass

from .crypto.curve import COORD_BYTES, Q, SCALAR_BYTES, has_even_y, solve_y

REQ_LEN = 104
REP_LEN = 88
ACK_LEN = 20
REG_REPLY_LEN = 132
UPDATE_LEN = 36

PID_LEN = 16
TAG_LEN = 20
S1_LEN = 28
S2_LEN = 64
TS_LEN = 4
TXID_LEN = 32
SIG_LEN = 56
TS_MOD = 1 << 32


class WireError(ValueError):
    """Base for all decode failures."""


class WrongLength(WireError):
    pass


class OffCurvePoint(WireError):
    pass


class NonCanonicalScalar(WireError):
    pass


def canonicalize_point(pt) -> bytes:
    """28-byte x of an even-y point. Odd-y input is a caller bug."""
    if pt is None:
        raise ValueError("cannot canonicalize the identity point")
    if not has_even_y(pt):
        raise ValueError("point is not in canonical even-y form")
    return pt[0].to_bytes(COORD_BYTES, "big")


def decanonicalize(data: bytes):
    if len(data) != COORD_BYTES:
        raise WrongLength(f"point field must be {COORD_BYTES} bytes")
    pt = solve_y(int.from_bytes(data, "big"))
    if pt is None:
        raise OffCurvePoint("x-coordinate has no curve solution")
    return pt


def ts_wrap(t: int) -> int:
    return t % TS_MOD


def ts_delta(now: int, then: int) -> int:
    """Signed smallest difference now - then on the 32-bit timestamp circle."""
    return (ts_wrap(now) - ts_wrap(then) + (TS_MOD >> 1)) % TS_MOD - (TS_MOD >> 1)


def _decode_scalar(data: bytes) -> int:
    v = int.from_bytes(data, "big")
    if v >= Q:
        raise NonCanonicalScalar("scalar field not reduced")
    return v


@dataclass(frozen=True)
class AuthRequest:
    """Handover request: (pID, m, A, S1, T1), 104 bytes."""

    pid: bytes
    m: int
    a_point: "tuple[int, int]"
    s1: bytes
    t1: int

    def encode(self) -> bytes:
        if len(self.pid) != PID_LEN or len(self.s1) != S1_LEN:
            raise ValueError("request field width violation")
        return (
            self.pid
            + (self.m % Q).to_bytes(SCALAR_BYTES, "big")
            + canonicalize_point(self.a_point)
            + self.s1
            + ts_wrap(self.t1).to_bytes(TS_LEN, "big")
        )

    @classmethod
    def decode(cls, data: bytes) -> "AuthRequest":
        if len(data) != REQ_LEN:
            raise WrongLength(f"request must be {REQ_LEN} bytes, got {len(data)}")
        pid = data[:16]
        m = _decode_scalar(data[16:44])
        a_point = decanonicalize(data[44:72])
        s1 = data[72:100]
        t1 = int.from_bytes(data[100:104], "big")
        return cls(pid=pid, m=m, a_point=a_point, s1=s1, t1=t1)


@dataclass(frozen=True)
class AuthReply:
    """Handover reply: (S2, S3, T2), 88 bytes."""

    s2: bytes
    s3: bytes
    t2: int

    def encode(self) -> bytes:
        if len(self.s2) != S2_LEN or len(self.s3) != TAG_LEN:
            raise ValueError("reply field width violation")
        return self.s2 + self.s3 + ts_wrap(self.t2).to_bytes(TS_LEN, "big")

    @classmethod
    def decode(cls, data: bytes) -> "AuthReply":
        if len(data) != REP_LEN:
            raise WrongLength(f"reply must be {REP_LEN} bytes, got {len(data)}")
        return cls(s2=data[:64], s3=data[64:84], t2=int.from_bytes(data[84:88], "big"))


@dataclass(frozen=True)
class AuthAck:
    """Final acknowledgement: one 20-byte transcript tag."""

    ack: bytes

    def encode(self) -> bytes:
        if len(self.ack) != ACK_LEN:
            raise ValueError("ack field width violation")
        return self.ack

    @classmethod
    def decode(cls, data: bytes) -> "AuthAck":
        if len(data) != ACK_LEN:
            raise WrongLength(f"ack must be {ACK_LEN} bytes, got {len(data)}")
        return cls(ack=data)


@dataclass(frozen=True)
class RegistrationRequest:
    """Sealed identity blob forwarded to the authority (variable length)."""

    c1: bytes

    def encode(self) -> bytes:
        if len(self.c1) > 0xFFFF:
            raise ValueError("sealed blob too large")
        return len(self.c1).to_bytes(2, "big") + self.c1

    @classmethod
    def decode(cls, data: bytes) -> "RegistrationRequest":
        if len(data) < 2:
            raise WrongLength("registration request truncated")
        n = int.from_bytes(data[:2], "big")
        if len(data) != 2 + n:
            raise WrongLength("registration request length mismatch")
        return cls(c1=data[2:])


@dataclass(frozen=True)
class RegistrationReply:
    """Receipt handed back to the vehicle: (TXID, sigma, T_Exp, pID, D)."""

    txid: bytes
    sig: bytes
    t_exp: int
    pid: bytes
    d: bytes

    def encode(self) -> bytes:
        if (
            len(self.txid) != TXID_LEN
            or len(self.sig) != SIG_LEN
            or len(self.pid) != PID_LEN
            or len(self.d) != TAG_LEN
        ):
            raise ValueError("registration reply field width violation")
        return self.txid + self.sig + self.t_exp.to_bytes(8, "big") + self.pid + self.d

    @classmethod
    def decode(cls, data: bytes) -> "RegistrationReply":
        if len(data) != REG_REPLY_LEN:
            raise WrongLength(f"registration reply must be {REG_REPLY_LEN} bytes")
        return cls(
            txid=data[:32],
            sig=data[32:88],
            t_exp=int.from_bytes(data[88:96], "big"),
            pid=data[96:112],
            d=data[112:132],
        )


@dataclass(frozen=True)
class UpdateMsg:
    """Credential rotation push: session-key-encrypted (pID', D'), 36 bytes."""

    s_upd: bytes

    def encode(self) -> bytes:
        if len(self.s_upd) != UPDATE_LEN:
            raise ValueError("update field width violation")
        return self.s_upd

    @classmethod
    def decode(cls, data: bytes) -> "UpdateMsg":
        if len(data) != UPDATE_LEN:
            raise WrongLength(f"update must be {UPDATE_LEN} bytes")
        return cls(s_upd=data)


def transcript_line(direction: str, name: str, payload: bytes) -> str:
    """Hex-dump form used by golden transcripts: 'src->dst NAME hex'."""
    return f"{direction} {name} {payload.hex()}"
