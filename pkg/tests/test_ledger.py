import random

import pytest

from v2xauth import ledger as lg
from v2xauth.crypto import curve


def _pt(rng):
    return curve.scalar_mul(curve.GEN, curve.rand_nonzero_scalar(rng))


def _reg(rng, t_exp=10_000):
    return lg.Registration(sig=rng.randbytes(56), ch=_pt(rng), t_exp=t_exp)


def test_append_and_get_round_trip():
    rng = random.Random(0x80)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    payload = _reg(rng)
    txid = chain.append(payload, token, now=0)
    assert len(txid) == 32
    assert chain.get(txid).payload == payload


def test_duplicate_live_registration_rejected():
    rng = random.Random(0x81)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    payload = _reg(rng)
    chain.append(payload, token, now=0)
    with pytest.raises(lg.DuplicateRegistration):
        chain.append(lg.Registration(sig=rng.randbytes(56), ch=payload.ch, t_exp=10_000), token, now=1)


def test_expired_registration_can_be_replaced():
    rng = random.Random(0x82)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    payload = _reg(rng, t_exp=100)
    chain.append(payload, token, now=0)
    # expired at now=100: same commitment registers again
    chain.append(lg.Registration(sig=rng.randbytes(56), ch=payload.ch, t_exp=500), token, now=100)


def test_writer_capability_enforced():
    rng = random.Random(0x83)
    chain = lg.Ledger()
    reg_token = chain.mint_token("registration")
    rev_token = chain.mint_token("revocation")
    foreign = lg.WriterToken("registration")
    with pytest.raises(lg.UnauthorizedWriter):
        chain.append(_reg(rng), foreign, now=0)
    with pytest.raises(lg.UnauthorizedWriter):
        chain.append(_reg(rng), rev_token, now=0)
    with pytest.raises(lg.UnauthorizedWriter):
        chain.append(lg.Revocation(ch=_pt(rng)), reg_token, now=0)


def test_content_addressing_flips_on_any_change():
    rng = random.Random(0x84)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    payload = _reg(rng)
    txid = chain.append(payload, token, now=0)
    assert chain.verify_inclusion(txid, payload)
    tampered = lg.Registration(sig=payload.sig, ch=payload.ch, t_exp=payload.t_exp + 1)
    assert not chain.verify_inclusion(txid, tampered)
    flip_sig = bytearray(payload.sig)
    flip_sig[0] ^= 1
    assert not chain.verify_inclusion(txid, lg.Registration(bytes(flip_sig), payload.ch, payload.t_exp))
    assert not chain.verify_inclusion(rng.randbytes(32), payload)


def test_view_sync_delay_and_convergence():
    rng = random.Random(0x85)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    fast = lg.LedgerView("n1", chain, sync_delay_ms=10)
    slow = lg.LedgerView("n2", chain, sync_delay_ms=200)
    payload = _reg(rng)
    chain.append(payload, token, now=1000)

    fast.sync_to(1010)
    slow.sync_to(1010)
    assert fast.find_by_ch(payload.ch) is not None
    assert slow.find_by_ch(payload.ch) is None  # not yet visible

    # after quiescence >= max delay, all views identical
    fast.sync_to(1200)
    slow.sync_to(1200)
    assert fast.applied_height == slow.applied_height == chain.height()
    assert slow.find_by_ch(payload.ch).txid == fast.find_by_ch(payload.ch).txid


def test_revocation_propagates_to_views():
    rng = random.Random(0x86)
    chain = lg.Ledger()
    reg_token = chain.mint_token("registration")
    rev_token = chain.mint_token("revocation")
    views = [lg.LedgerView(f"n{i}", chain, sync_delay_ms=i * 50) for i in range(3)]
    payload = _reg(rng)
    chain.append(payload, reg_token, now=0)
    chain.append(lg.Revocation(ch=payload.ch), rev_token, now=10)
    for v in views:
        v.sync_to(10 + 200)
        assert v.is_revoked(payload.ch)
        assert not v.is_revoked(_pt(rng))


def test_append_only_prefix_property():
    rng = random.Random(0x87)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    snapshots = []
    for _ in range(5):
        chain.append(_reg(rng), token, now=0)
        snapshots.append([tx.txid for tx in chain.entries])
    for earlier, later in zip(snapshots, snapshots[1:]):
        assert later[: len(earlier)] == earlier
    heights = [tx.height for tx in chain.entries]
    assert heights == sorted(set(heights))


def test_snapshot_round_trip():
    rng = random.Random(0x88)
    chain = lg.Ledger()
    reg_token = chain.mint_token("registration")
    rev_token = chain.mint_token("revocation")
    reg = _reg(rng)
    chain.append(reg, reg_token, now=5)
    chain.append(lg.Revocation(ch=reg.ch), rev_token, now=9)
    text = lg.snapshot_dump(chain)
    restored = lg.snapshot_load(text)
    assert [tx.txid for tx in restored.entries] == [tx.txid for tx in chain.entries]
    assert restored.entries[0].payload == reg


def test_snapshot_rejects_tampered_content():
    rng = random.Random(0x89)
    chain = lg.Ledger()
    token = chain.mint_token("registration")
    chain.append(_reg(rng), token, now=5)
    lines = lg.snapshot_dump(chain).splitlines()
    height, txid_hex, payload_hex, ts = lines[0].split()
    payload = bytearray(bytes.fromhex(payload_hex))
    payload[1] ^= 1
    with pytest.raises(lg.LedgerError):
        lg.snapshot_load(f"{height} {txid_hex} {payload.hex()} {ts}\n")
