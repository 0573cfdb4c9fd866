"""Simulated append-only ledger shared by the authority and the region
servers.

The chain is modeled as a single canonical in-process log with
content-addressed entries; there is no consensus because the protocol
treats the chain as a trusted synchronization substrate. Each full node
holds a ``LedgerView`` that applies the canonical log with a configured
propagation delay, which is what makes cross-domain scenarios (register
in one region, authenticate in another after sync) meaningful.

Write access is capability-gated: registration entries require the
authority's writer token, revocation entries a region server's.
Expiry is enforced at lookup: a registration past its T_Exp no longer
counts as live, and its commitment may be registered again.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .crypto.curve import point_compress, point_decompress


class LedgerError(Exception):
    pass


class DuplicateRegistration(LedgerError):
    """Commitment already has a live (unexpired) registration."""


class UnauthorizedWriter(LedgerError):
    pass


@dataclass(frozen=True)
class Registration:
    sig: bytes
    ch: "tuple[int, int]"
    t_exp: int

    def to_bytes(self) -> bytes:
        return b"\x01" + self.sig + point_compress(self.ch) + self.t_exp.to_bytes(8, "big")


@dataclass(frozen=True)
class Revocation:
    ch: "tuple[int, int]"

    def to_bytes(self) -> bytes:
        return b"\x02" + point_compress(self.ch)


def _payload_from_bytes(data: bytes):
    if data[:1] == b"\x01":
        return Registration(
            sig=data[1:57],
            ch=point_decompress(data[57:86]),
            t_exp=int.from_bytes(data[86:94], "big"),
        )
    if data[:1] == b"\x02":
        return Revocation(ch=point_decompress(data[1:30]))
    raise LedgerError("unknown payload kind")


def compute_txid(payload, height: int) -> bytes:
    return hashlib.sha256(payload.to_bytes() + height.to_bytes(8, "big")).digest()


@dataclass(frozen=True)
class LedgerTx:
    txid: bytes
    payload: "Registration | Revocation"
    height: int
    timestamp: int


class WriterToken:
    """Opaque append capability; compared by identity."""

    def __init__(self, role: str):
        if role not in ("registration", "revocation"):
            raise ValueError("unknown writer role")
        self.role = role


class Ledger:
    """Canonical log. Entries are immutable and heights strictly increase."""

    def __init__(self):
        self.entries: list[LedgerTx] = []
        self._by_txid: dict[bytes, LedgerTx] = {}
        self._tokens: set[WriterToken] = set()

    def mint_token(self, role: str) -> WriterToken:
        token = WriterToken(role)
        self._tokens.add(token)
        return token

    def _live_registration(self, ch_key: bytes, now: int):
        for tx in self.entries:
            if isinstance(tx.payload, Registration) and point_compress(tx.payload.ch) == ch_key:
                if tx.payload.t_exp > now:
                    return tx
        return None

    def append(self, payload, token: WriterToken, now: int) -> bytes:
        if token not in self._tokens:
            raise UnauthorizedWriter("unknown writer token")
        if isinstance(payload, Registration):
            if token.role != "registration":
                raise UnauthorizedWriter("token cannot write registrations")
            if self._live_registration(point_compress(payload.ch), now) is not None:
                raise DuplicateRegistration("commitment already registered and unexpired")
        elif isinstance(payload, Revocation):
            if token.role != "revocation":
                raise UnauthorizedWriter("token cannot write revocations")
        else:
            raise LedgerError("unknown payload type")
        height = len(self.entries)
        tx = LedgerTx(txid=compute_txid(payload, height), payload=payload, height=height, timestamp=now)
        self.entries.append(tx)
        self._by_txid[tx.txid] = tx
        return tx.txid

    def get(self, txid: bytes):
        return self._by_txid.get(txid)

    def verify_inclusion(self, txid: bytes, payload) -> bool:
        tx = self._by_txid.get(txid)
        if tx is None:
            return False
        return compute_txid(payload, tx.height) == txid

    def height(self) -> int:
        return len(self.entries)


@dataclass
class LedgerView:
    """One node's eventually-consistent slice of the canonical log."""

    node_id: str
    ledger: Ledger
    sync_delay_ms: int = 0
    applied_height: int = 0
    _ch_index: dict = field(default_factory=dict)  # ch bytes -> newest registration tx
    _revoked: set = field(default_factory=set)

    def sync_to(self, now: int) -> None:
        """Apply every canonical entry visible to this node at ``now``."""
        while self.applied_height < len(self.ledger.entries):
            tx = self.ledger.entries[self.applied_height]
            if tx.timestamp + self.sync_delay_ms > now:
                break
            if isinstance(tx.payload, Registration):
                self._ch_index[point_compress(tx.payload.ch)] = tx
            else:
                self._revoked.add(point_compress(tx.payload.ch))
            self.applied_height += 1

    def find_by_ch(self, ch):
        """Registration tx for this commitment, if synced. Expiry is the
        caller's check; the tx carries its own T_Exp."""
        return self._ch_index.get(point_compress(ch))

    def is_revoked(self, ch) -> bool:
        return point_compress(ch) in self._revoked

    def verify_inclusion(self, txid: bytes, payload) -> bool:
        return self.ledger.verify_inclusion(txid, payload)


# --- snapshot fixtures --------------------------------------------------------


def snapshot_dump(ledger: Ledger) -> str:
    """Line-delimited snapshot: 'height txid_hex payload_hex timestamp'."""
    lines = []
    for tx in ledger.entries:
        lines.append(f"{tx.height} {tx.txid.hex()} {tx.payload.to_bytes().hex()} {tx.timestamp}")
    return "\n".join(lines) + ("\n" if lines else "")


def snapshot_load(text: str) -> Ledger:
    ledger = Ledger()
    for line in text.splitlines():
        if not line.strip():
            continue
        height_s, txid_hex, payload_hex, ts_s = line.split()
        payload = _payload_from_bytes(bytes.fromhex(payload_hex))
        height = int(height_s)
        if height != len(ledger.entries):
            raise LedgerError("snapshot heights not contiguous")
        tx = LedgerTx(
            txid=compute_txid(payload, height),
            payload=payload,
            height=height,
            timestamp=int(ts_s),
        )
        if tx.txid != bytes.fromhex(txid_hex):
            raise LedgerError("snapshot txid does not match content")
        ledger.entries.append(tx)
        ledger._by_txid[tx.txid] = tx
    return ledger
