"""Three-party advantage distillation on sifted bit streams.

Alice, Bob and Charlie cut their sequences into blocks of ``n`` rounds.
For each block Bob and Charlie send their bits XOR-ed with fresh random
masks ``r`` and ``t``; Alice keeps the block when the XOR of the three
sequences is all-zero or all-one, and the parties then keep the first
triple of the block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class DistillationStats:
    blocks_total: int
    blocks_kept: int
    bits_out: int
    empirical_retention: float
    empirical_qber_before: float
    empirical_qber_after: float


def _bits(seq, name: str) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.uint8)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be a 1-D bit sequence")
    if arr.size and arr.max() > 1:
        raise DomainError(f"{name} must contain only 0/1")
    return arr


def mask_block(block, mask: int) -> np.ndarray:
    """XOR every bit of ``block`` with the constant ``mask``."""
    arr = _bits(block, "block")
    if arr.size < 1:
        raise DomainError("block must not be empty")
    return arr ^ np.uint8(mask & 1)


def _agree(parities: np.ndarray) -> np.ndarray:
    # rows whose parity vector is constant
    return np.all(parities == parities[..., :1], axis=-1)


def ad_decision(a_block, b_masked, c_masked) -> bool:
    """True when a XOR b XOR c is the all-zero or all-one vector."""
    a = _bits(a_block, "a_block")
    b = _bits(b_masked, "b_masked")
    c = _bits(c_masked, "c_masked")
    if not a.size == b.size == c.size:
        raise DomainError("blocks must have equal length")
    return bool(_agree(a ^ b ^ c))


def run_distillation(a_seq, b_seq, c_seq, n: int, mask_source: np.random.Generator):
    """Apply one pass of advantage distillation.

    Masks are drawn per block from ``mask_source``: first all ``r`` bits, then
    all ``t`` bits.  A trailing partial block is dropped.  Returns the kept
    ``(a, b, c)`` triples as an ``(k, 3)`` uint8 array and the statistics.
    """
    a = _bits(a_seq, "a_seq")
    b = _bits(b_seq, "b_seq")
    c = _bits(c_seq, "c_seq")
    if not a.size == b.size == c.size:
        raise DomainError("sequences must have equal length")
    if n < 1:
        raise DomainError(f"block length must be >= 1, got {n}")
    blocks = a.size // n
    used = blocks * n
    a_blk = a[:used].reshape(blocks, n)
    b_blk = b[:used].reshape(blocks, n)
    c_blk = c[:used].reshape(blocks, n)

    r = mask_source.integers(0, 2, size=blocks, dtype=np.uint8)
    t = mask_source.integers(0, 2, size=blocks, dtype=np.uint8)
    b_sent = b_blk ^ r[:, None]
    c_sent = c_blk ^ t[:, None]
    keep = _agree(a_blk ^ b_sent ^ c_sent)

    kept = np.stack([a_blk[keep, 0], b_blk[keep, 0], c_blk[keep, 0]], axis=1)
    n_kept = int(keep.sum())
    before = float((a_blk ^ b_blk ^ c_blk).mean()) if used else 0.0
    after = float((kept[:, 0] ^ kept[:, 1] ^ kept[:, 2]).mean()) if n_kept else 0.0
    stats = DistillationStats(
        blocks_total=blocks,
        blocks_kept=n_kept,
        bits_out=n_kept,
        empirical_retention=n_kept / blocks if blocks else 0.0,
        empirical_qber_before=before,
        empirical_qber_after=after,
    )
    return kept, stats


def reconstruct_secret(b_seq, c_seq) -> np.ndarray:
    """Bob's reconstruction of Alice's bits from his and Charlie's: b XOR c."""
    b = _bits(b_seq, "b_seq")
    c = _bits(c_seq, "c_seq")
    if b.size != c.size:
        raise DomainError("sequences must have equal length")
    return b ^ c
