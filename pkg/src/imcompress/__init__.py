"""Influence maximization with compressed reverse-reachable samples.

Sampled RRR sets are kept Huffman- or bitmap-encoded and greedy seed
selection runs directly on the encoded data.
"""
from .characterize import Characterization, Encoding, characterize, choose_encoding, density, skewness
from .graph import Graph, assign_weights, from_edges, load_edge_list, read_binary, transpose, write_binary
from .pipeline import RunConfig, RunStats, run
from .sampling import RRRBlock, RRRSet, SamplingPlan, estimate_theta, sample_block, sample_rrr, theta_bound
from .selection import SeedSet, merged_argmax, select_bitmax, select_huffmax, select_raw

__version__ = "0.1.0"
