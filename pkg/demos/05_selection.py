"""
Greedy seed selection in all three storage modes
================================================

The selectors share one tie rule (lowest id) and recount from live data
every round, so on the same samples they agree pick for pick.
"""
import numpy as np

from imcompress import RRRBlock, merged_argmax, select_bitmax, select_huffmax, select_raw
from imcompress import bitmap, huffman

sets = [[1, 2], [1, 3], [4]]
print("raw:", select_raw(sets, 2, n=5).seeds, select_raw(sets, 2, n=5).coverage)

rng = np.random.default_rng(3)
n = 60
sets = [rng.choice(n, size=rng.integers(1, 12), replace=False) for _ in range(3000)]
blk = RRRBlock.from_sets(sets)
hist = np.bincount(blk.members, minlength=n)

cb = huffman.build_codebook(blk, n)
enc = huffman.encode_block(cb, blk, int(hist.argmax()))
bm = bitmap.encode_block(blk, n)

print("raw    ", select_raw(blk, 5, n=n).seeds)
print("huffman", select_huffmax(cb, enc, hist, 5).seeds)
print("bitmap ", select_bitmax(bm, hist, 5).seeds)

# With several workers the cheap merge only compares each worker's local winner.
tables = np.array([[3, 5], [4, 1]])
print("local winners", tables.argmax(axis=1).tolist(), "-> merged pick", merged_argmax(tables))
