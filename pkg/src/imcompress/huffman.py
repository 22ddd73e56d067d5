"""Huffman coding of RRR sets with an uncodable-vertex fallback.

The codebook is built once from the warm-up block. Vertices that never
occurred there have no code; they are stored verbatim in a per-set
``copied`` array. Bits are packed most-significant-bit first and each
set's payload starts on a byte boundary.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, TextIO, Union

import numba as nb
import numpy as np

from .sampling import RRRBlock, RRRSet

__all__ = [
    "HuffmanCodebook",
    "HuffmanDecodeError",
    "EncodedRRR",
    "EncodedBlock",
    "build_codebook",
    "encode_rrr",
    "encode_block",
    "decode_find",
    "decode",
    "MAX_CODE_LENGTH",
]

MAX_CODE_LENGTH = 64

FOUND = 1
NOT_FOUND = 0
CORRUPT = -1


class HuffmanDecodeError(ValueError):
    """The bit payload does not end on a codeword boundary."""


def _tree_from_codes(items):
    """Decode tree arrays from ``(vertex, bits, length)`` triples."""
    children = [[-1, -1]]
    symbols = [-1]
    for v, bits, length in items:
        node = 0
        for b in range(length - 1, -1, -1):
            if symbols[node] >= 0:
                raise ValueError(f"code for vertex {v} extends another codeword")
            bit = (bits >> b) & 1
            nxt = children[node][bit]
            if nxt < 0:
                nxt = len(symbols)
                children.append([-1, -1])
                symbols.append(-1)
                children[node][bit] = nxt
            node = nxt
        if symbols[node] >= 0 or children[node] != [-1, -1]:
            raise ValueError(f"code for vertex {v} is a prefix of, or equal to, another codeword")
        symbols[node] = v
    return np.asarray(children, dtype=np.int32).reshape(-1, 2), np.asarray(symbols, dtype=np.int32)


@dataclass(frozen=True)
class HuffmanCodebook:
    codes: np.ndarray
    lengths: np.ndarray
    children: np.ndarray
    symbols: np.ndarray

    @classmethod
    def from_lengths_and_codes(cls, table: Mapping[int, tuple[int, int]], size: Optional[int] = None):
        if not table:
            raise ValueError("empty codebook")
        size = max(size or 0, max(table) + 1)
        codes = np.zeros(size, dtype=np.uint64)
        lengths = np.zeros(size, dtype=np.uint8)
        for v, (bits, length) in table.items():
            if not 1 <= length <= MAX_CODE_LENGTH:
                raise ValueError(f"code length {length} for vertex {v} outside [1, {MAX_CODE_LENGTH}]")
            codes[v] = bits
            lengths[v] = length
        children, symbols = _tree_from_codes(sorted((v, b, l) for v, (b, l) in table.items()))
        return cls(codes, lengths, children, symbols)

    @classmethod
    def from_codes(cls, codes: Mapping[int, str], size: Optional[int] = None):
        """Codebook from explicit bit strings, e.g. ``{0: "0", 1: "10"}``."""
        return cls.from_lengths_and_codes({v: (int(s, 2), len(s)) for v, s in codes.items()}, size)

    @classmethod
    def from_frequencies(cls, freqs, size: Optional[int] = None):
        """Standard Huffman construction.

        Heap ties are broken by the smallest vertex id in each subtree, so
        the tree (and every encoded byte) is reproducible. The first node
        popped becomes the 0 branch.
        """
        if isinstance(freqs, Mapping):
            items = [(int(v), int(c)) for v, c in freqs.items() if c > 0]
        else:
            arr = np.asarray(freqs)
            nz = np.flatnonzero(arr)
            items = list(zip(nz.tolist(), arr[nz].tolist()))
        if not items:
            raise ValueError("cannot build a codebook from zero occurrences")
        if len(items) == 1:
            return cls.from_lengths_and_codes({items[0][0]: (0, 1)}, size)

        # node: (left, right) for internal, vertex id for leaf
        nodes: list = []
        heap = []
        for v, c in items:
            heap.append((c, v, len(nodes)))
            nodes.append(v)
        heapq.heapify(heap)
        while len(heap) > 1:
            w0, m0, a = heapq.heappop(heap)
            w1, m1, b = heapq.heappop(heap)
            heapq.heappush(heap, (w0 + w1, min(m0, m1), len(nodes)))
            nodes.append((a, b))

        table = {}
        stack = [(heap[0][2], 0, 0)]
        while stack:
            idx, bits, depth = stack.pop()
            node = nodes[idx]
            if isinstance(node, tuple):
                if depth >= MAX_CODE_LENGTH:
                    raise ValueError("Huffman code longer than 64 bits")
                stack.append((node[0], bits << 1, depth + 1))
                stack.append((node[1], (bits << 1) | 1, depth + 1))
            else:
                table[node] = (bits, depth)
        return cls.from_lengths_and_codes(table, size)

    def __len__(self) -> int:
        return int(np.count_nonzero(self.lengths))

    def __contains__(self, v) -> bool:
        return 0 <= v < self.lengths.size and self.lengths[v] > 0

    def code_of(self, v: int) -> Optional[tuple[int, int]]:
        if v not in self:
            return None
        return int(self.codes[v]), int(self.lengths[v])

    def bitstring(self, v: int) -> str:
        bits, length = self.code_of(v)
        return format(bits, f"0{length}b")

    def coded_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.lengths).astype(np.int32)

    def kraft_sum(self) -> float:
        lens = self.lengths[self.lengths > 0].astype(np.float64)
        return float(np.sum(np.exp2(-lens)))

    def dump(self, fp: TextIO) -> None:
        """Debug listing: ``vertex length bits`` per coded vertex."""
        for v in self.coded_vertices():
            fp.write(f"{v} {self.lengths[v]} {self.bitstring(int(v))}\n")


def build_codebook(block: RRRBlock, n: Optional[int] = None) -> HuffmanCodebook:
    """Codebook from vertex frequencies in the warm-up block."""
    if block.members.size == 0:
        raise ValueError("warm-up block holds no vertex occurrences")
    return HuffmanCodebook.from_frequencies(np.bincount(block.members, minlength=n or 0), size=n)


@nb.njit(inline="always")
def _put(data, bitpos, code, length):
    for b in range(length - 1, -1, -1):
        if (code >> np.uint64(b)) & np.uint64(1):
            data[bitpos >> 3] |= np.uint8(0x80 >> (bitpos & 7))
        bitpos += 1
    return bitpos


@nb.njit(inline="always")
def _codable(v, lengths):
    return v < lengths.size and lengths[v] > 0


@nb.njit(nogil=True, cache=True)
def _encode_sets(offsets, members, codes, lengths, u_star):
    nsets = offsets.size - 1
    nbits = np.zeros(nsets, np.int64)
    ncopied = np.zeros(nsets, np.int64)
    for j in range(nsets):
        for t in range(offsets[j], offsets[j + 1]):
            v = members[t]
            if _codable(v, lengths):
                nbits[j] += lengths[v]
            else:
                ncopied[j] += 1
    byte_off = np.zeros(nsets + 1, np.int64)
    copied_off = np.zeros(nsets + 1, np.int64)
    for j in range(nsets):
        byte_off[j + 1] = byte_off[j] + (nbits[j] + 7) // 8
        copied_off[j + 1] = copied_off[j] + ncopied[j]
    data = np.zeros(byte_off[nsets], np.uint8)
    copied = np.empty(copied_off[nsets], np.int32)
    u_codable = u_star >= 0 and _codable(u_star, lengths)
    for j in range(nsets):
        bitpos = byte_off[j] * 8
        cp = copied_off[j]
        # u_star trades places with the first codable member
        first = -1
        at = -1
        if u_codable:
            for t in range(offsets[j], offsets[j + 1]):
                if _codable(members[t], lengths):
                    if first < 0:
                        first = t
                    if members[t] == u_star:
                        at = t
                        break
        for t in range(offsets[j], offsets[j + 1]):
            v = members[t]
            if _codable(v, lengths):
                if at >= 0:
                    if t == first:
                        v = u_star
                    elif t == at:
                        v = members[first]
                bitpos = _put(data, bitpos, codes[v], lengths[v])
            else:
                copied[cp] = v
                cp += 1
    return data, byte_off, nbits, copied, copied_off


@nb.njit(nogil=True, cache=True)
def _decode_find(data, byte_start, bit_len, children, symbols, u_star, out):
    """Walk the tree bit by bit; stop right after ``u_star`` is emitted.

    Returns ``(status, count)`` with status FOUND, NOT_FOUND or CORRUPT.
    """
    node = 0
    count = 0
    base = byte_start * 8
    for i in range(bit_len):
        pos = base + i
        bit = (data[pos >> 3] >> (7 - (pos & 7))) & 1
        node = children[node, bit]
        if node < 0:
            return -1, count
        s = symbols[node]
        if s >= 0:
            out[count] = s
            count += 1
            if s == u_star:
                return 1, count
            node = 0
    if node != 0:
        return -1, count
    return 0, count


@dataclass(frozen=True)
class EncodedRRR:
    bits: bytes
    bit_length: int
    copied: np.ndarray

    @property
    def nbytes(self) -> int:
        return len(self.bits) + 4 * int(self.copied.size)


@dataclass
class EncodedBlock:
    """Huffman payloads of one block, concatenated, plus copied vertices."""

    data: np.ndarray
    byte_offsets: np.ndarray
    bit_lengths: np.ndarray
    copied: np.ndarray
    copied_offsets: np.ndarray
    block_index: int = 1

    def __len__(self) -> int:
        return self.bit_lengths.size

    def __getitem__(self, j: int) -> EncodedRRR:
        a, b = self.byte_offsets[j], self.byte_offsets[j + 1]
        return EncodedRRR(
            self.data[a:b].tobytes(),
            int(self.bit_lengths[j]),
            self.copied[self.copied_offsets[j]:self.copied_offsets[j + 1]],
        )

    @property
    def nbytes(self) -> int:
        """Payload bytes plus 4 bytes per copied vertex."""
        return int(self.data.size) + 4 * int(self.copied.size)


def _as_members(rrr: Union[RRRSet, Sequence[int], np.ndarray]) -> np.ndarray:
    if isinstance(rrr, RRRSet):
        return rrr.members
    return np.asarray(rrr, dtype=np.int32)


def encode_block(codebook: HuffmanCodebook, block: RRRBlock, u_star: Optional[int] = None) -> EncodedBlock:
    """Encode every set; ``u_star`` (if present and coded) leads its set."""
    data, byte_off, nbits, copied, copied_off = _encode_sets(
        block.offsets, block.members, codebook.codes, codebook.lengths,
        np.int64(-1 if u_star is None else u_star),
    )
    return EncodedBlock(data, byte_off, nbits, copied, copied_off, block.block_index)


def encode_rrr(codebook: HuffmanCodebook, rrr, u_star: Optional[int] = None) -> EncodedRRR:
    members = _as_members(rrr)
    offsets = np.array([0, members.size], dtype=np.int64)
    data, _, nbits, copied, _ = _encode_sets(
        offsets, members, codebook.codes, codebook.lengths,
        np.int64(-1 if u_star is None else u_star),
    )
    return EncodedRRR(data.tobytes(), int(nbits[0]), copied)


def decode_find(codebook: HuffmanCodebook, enc: EncodedRRR, u_star: int) -> tuple[bool, np.ndarray]:
    """Decode until ``u_star`` shows up, then fall back to the copied ids.

    Returns ``(found, decoded)``; ``decoded`` is the codeword prefix up to
    and including ``u_star`` on an early stop, otherwise the whole coded
    part.
    """
    data = np.frombuffer(enc.bits, dtype=np.uint8)
    out = np.empty(enc.bit_length, dtype=np.int32)
    status, count = _decode_find(
        data, np.int64(0), np.int64(enc.bit_length),
        codebook.children, codebook.symbols, np.int64(u_star), out,
    )
    if status == CORRUPT:
        raise HuffmanDecodeError("bit stream does not end on a codeword boundary")
    decoded = out[:count]
    if status == FOUND:
        return True, decoded
    return bool(np.any(enc.copied == u_star)), decoded


def decode(codebook: HuffmanCodebook, enc: EncodedRRR) -> np.ndarray:
    """All members: the decoded codewords followed by the copied ids."""
    _, decoded = decode_find(codebook, enc, -1)
    return np.concatenate([decoded, enc.copied.astype(np.int32)])
