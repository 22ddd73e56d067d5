"""Dense vertex-by-sample bit matrices.

Row ``r`` of a block holds one bit per RRR set of that block; the bit is
set when vertex ``r`` belongs to the set. Columns are padded with zero
bits up to a multiple of 32 and stored as ``uint32`` words, column ``c``
at bit ``31 - c % 32`` of word ``c // 32`` (so a hex dump reads left to
right in column order).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, TextIO, Union

import numpy as np

from .sampling import RRRBlock

__all__ = [
    "BitmapBlock",
    "encode_block",
    "popcount_row",
    "popcounts",
    "snapshot_row",
    "subtract_row",
    "subtract_rows",
    "row_bits",
    "hex_dump",
]

WORD_BITS = 32


@dataclass
class BitmapBlock:
    words: np.ndarray
    n_cols: int
    block_index: int = 1

    @property
    def n_rows(self) -> int:
        return self.words.shape[0]

    @property
    def padded_cols(self) -> int:
        return self.words.shape[1] * WORD_BITS

    @property
    def nbytes(self) -> int:
        return self.n_rows * self.padded_cols // 8

    @classmethod
    def from_rows(cls, rows: Sequence[str], block_index: int = 1) -> "BitmapBlock":
        """Build from bit strings such as ``"110011"`` (one per vertex)."""
        n_cols = len(rows[0]) if rows else 0
        sets = [[r for r, row in enumerate(rows) if row[c] == "1"] for c in range(n_cols)]
        members = np.fromiter((v for s in sets for v in s), dtype=np.int32)
        offsets = np.zeros(n_cols + 1, dtype=np.int64)
        np.cumsum([len(s) for s in sets], out=offsets[1:])
        roots = np.array([s[0] if s else -1 for s in sets], dtype=np.int32)
        return encode_block(RRRBlock(roots, offsets, members, block_index), len(rows))


Blocks = Union[BitmapBlock, Sequence[BitmapBlock]]


def _blocks(bms: Blocks) -> Sequence[BitmapBlock]:
    return [bms] if isinstance(bms, BitmapBlock) else bms


def encode_block(block: RRRBlock, n: int) -> BitmapBlock:
    count = len(block)
    if block.members.size and (block.members.min() < 0 or block.members.max() >= n):
        raise ValueError("member id outside [0, n)")
    nwords = -(-count // WORD_BITS)
    words = np.zeros((n, nwords), dtype=np.uint32)
    cols = np.repeat(np.arange(count, dtype=np.int64), block.sizes)
    flat = block.members.astype(np.int64) * nwords + (cols >> 5)
    bits = np.left_shift(np.uint32(1), (31 - (cols & 31)).astype(np.uint32))
    np.bitwise_or.at(words.reshape(-1), flat, bits)
    return BitmapBlock(words, count, block.block_index)


def popcounts(bms: Blocks) -> np.ndarray:
    """Set-bit count of every row, summed over blocks."""
    blocks = _blocks(bms)
    total = np.zeros(blocks[0].n_rows, dtype=np.int64)
    for bm in blocks:
        total += np.bitwise_count(bm.words).sum(axis=1, dtype=np.int64)
    return total


def popcount_row(bms: Blocks, v: int) -> int:
    return int(sum(int(np.bitwise_count(bm.words[v]).sum()) for bm in _blocks(bms)))


def snapshot_row(bms: Blocks, u: int) -> list[np.ndarray]:
    """Copy of row ``u`` in every block, taken before any subtraction."""
    return [bm.words[u].copy() for bm in _blocks(bms)]


def subtract_row(bms: Blocks, v: int, u_row: Union[int, Sequence[np.ndarray]]) -> int:
    """Clear from row ``v`` every column set in ``u_row``; return new popcount.

    ``u_row`` is a snapshot from :func:`snapshot_row`. Passing a vertex id
    snapshots that row first, which is only safe when ``v`` is not that
    vertex or it is the last row touched.
    """
    blocks = _blocks(bms)
    if isinstance(u_row, (int, np.integer)):
        u_row = snapshot_row(blocks, int(u_row))
    total = 0
    for bm, u in zip(blocks, u_row):
        row = bm.words[v]
        row &= row ^ u
        total += int(np.bitwise_count(row).sum())
    return total


def subtract_rows(bm: BitmapBlock, u_row: np.ndarray, rows=None, cols: slice = slice(None)) -> np.ndarray:
    """Vectorised subtract over ``rows`` restricted to word columns ``cols``.

    Returns the popcount of each touched row within ``cols``.
    """
    if rows is None:
        sub = bm.words[:, cols]
        sub &= sub ^ u_row[cols]
        return np.bitwise_count(sub).sum(axis=1, dtype=np.int64)
    sub = bm.words[rows, cols]
    sub &= sub ^ u_row[cols]
    bm.words[rows, cols] = sub
    return np.bitwise_count(sub).sum(axis=1, dtype=np.int64)


def row_bits(bms: Blocks, v: int) -> str:
    """Row ``v`` as a 0/1 string over real (unpadded) columns, blocks concatenated."""
    out = []
    for bm in _blocks(bms):
        bits = np.unpackbits(bm.words[v].astype(">u4").view(np.uint8))
        out.append("".join("1" if b else "0" for b in bits[:bm.n_cols]))
    return "".join(out)


def hex_dump(bm: BitmapBlock, fp: TextIO) -> None:
    for r in range(bm.n_rows):
        fp.write(f"{r}: " + " ".join(f"{w:08x}" for w in bm.words[r]) + "\n")
