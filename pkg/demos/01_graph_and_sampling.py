"""
Loading a graph and drawing reverse-reachable samples
=====================================================

Edge lists use arbitrary integer ids; they are renumbered densely in
first-seen order and the originals kept in ``g.labels``.
"""
import numpy as np

from imcompress import load_edge_list, sample_block, sample_rrr, theta_bound, transpose, estimate_theta

text = b"""# who follows whom
100 200
200 300
300 100
100 400
400 500
500 100
"""
g = load_edge_list(text)  # weighted cascade: p(u, v) = 1 / indeg(v)
print("n =", g.num_vertices, "m =", g.num_edges, "labels =", g.labels.tolist())
print("edge probabilities:", g.probs.tolist())

# Samples walk the transposed graph. A seed (or a numpy Generator) fixes the coin flips.
g_t = transpose(g)
one = sample_rrr(g_t, 0, 7)
print("RRR set rooted at", g.label(0), "->", [g.label(v) for v in one.members])

# Blocks are addressed by global sample index, so the worker count never changes them.
a = sample_block(g_t, 1000, 1, rng_seed=42, workers=1)
b = sample_block(g_t, 1000, 1, rng_seed=42, workers=4)
print("identical across workers:", np.array_equal(a.members, b.members))
print("mean set size:", a.sizes.mean())

# Sample counts grow by doubling until the coverage lower bound is met.
print("theta for round 1, n=100 k=1 eps=0.5:", theta_bound(100, 1, 0.5, 1))
plan = estimate_theta(g, k=1, epsilon=0.5, rng_seed=42)
print(plan)
