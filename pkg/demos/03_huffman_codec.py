"""
Huffman-coding RRR sets
=======================

The codebook comes from vertex frequencies in the warm-up block. Later
blocks reuse it; vertices it does not know are stored as plain ids.
"""
import io

import numpy as np

from imcompress import RRRBlock
from imcompress.huffman import HuffmanCodebook, build_codebook, decode, decode_find, encode_block, encode_rrr

cb = HuffmanCodebook.from_frequencies({0: 5, 1: 2, 2: 1})
buf = io.StringIO()
cb.dump(buf)
print("vertex length code")
print(buf.getvalue())

# The current top vertex trades places with the first member, so a scan can stop at once.
enc = encode_rrr(cb, [1, 0, 2], u_star=0)
print("bits:", format(enc.bits[0], "08b")[:enc.bit_length], "length", enc.bit_length)
print("decode_find(u*=0):", decode_find(cb, enc, 0))

# Vertex 9 is not in the codebook and lands in the copied list.
enc = encode_rrr(cb, [1, 9, 2])
print("copied:", enc.copied.tolist(), "decoded:", decode(cb, enc).tolist())

rng = np.random.default_rng(1)
p = 1.0 / np.arange(1, 501) ** 1.5
p /= p.sum()
sets = [np.unique(rng.choice(500, size=10, p=p)) for _ in range(4000)]
warm, rest = RRRBlock.from_sets(sets[:2000]), RRRBlock.from_sets(sets[2000:], block_index=2)
cb = build_codebook(warm, 500)
for blk in (warm, rest):
    eb = encode_block(cb, blk, u_star=0)
    print(f"block {blk.block_index}: raw {blk.nbytes} B, encoded {eb.nbytes} B ({eb.nbytes / blk.nbytes:.2f})")
