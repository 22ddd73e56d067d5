"""
Picking an encoding from the warm-up block
==========================================

Skewness of the set sizes and density of the membership matrix decide
between Huffman, bitmap and plain storage.
"""
import numpy as np

from imcompress import characterize, choose_encoding

rng = np.random.default_rng(0)
n = 1000

# long right tail: most sets tiny, a few huge
heavy = np.minimum(rng.zipf(1.8, size=5000), n)
print("heavy tail ->", characterize(heavy, n))

# most sets cover most of the graph
flat = rng.integers(600, n + 1, size=5000)
print("flat head  ->", characterize(flat, n))

# negative skew but too sparse for a bitmap
sparse = 20 - np.minimum(rng.zipf(2.5, size=5000), 19)
print("sparse     ->", characterize(sparse, n))

# Published (S, D) pairs from six social graphs
for name, s, d in [("DBLP", 11.46, 0.00261), ("Orkut", 0.75, 0.2773), ("Pokec", -1.43, 0.6601)]:
    print(f"{name:8s} S={s:6.2f} D={d:.4f} -> {choose_encoding(s, d).value}")
