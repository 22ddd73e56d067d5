"""
End to end: estimate, sample-and-encode in blocks, select
=========================================================

The same run is available from the shell::

    imcompress --input graph.txt --k 5 --seed 42 --stats-json stats.json
"""
import json

import numpy as np

from imcompress import RunConfig, assign_weights, from_edges, run

rng = np.random.default_rng(6)
n, m = 500, 4000
src, dst = rng.integers(0, n, m), rng.integers(0, n, m)
keep = src != dst
g = assign_weights(from_edges(src[keep], dst[keep], n=n), "weighted-cascade")

seeds, stats = run(g, RunConfig(k=5, rng_seed=42))
print("theta:", stats.theta, "mode:", stats.mode.value, f"(S={stats.characterization.skewness:.2f}, "
      f"D={stats.characterization.density:.4f})")
print("seeds:", seeds.seeds, "coverage:", np.round(seeds.coverage, 3).tolist())

for mode in ("huffman", "bitmap", "raw"):
    s, st = run(g, RunConfig(k=5, rng_seed=42, mode=mode, theta=stats.theta))
    print(f"{mode:8s} seeds {s.seeds} raw {st.raw_bytes} B encoded {st.encoded_bytes} B peak {st.peak_bytes} B")

print(json.dumps(stats.memory, indent=2))
