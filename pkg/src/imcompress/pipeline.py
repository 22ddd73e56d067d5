"""End-to-end run: estimate the sample count, sample and encode block by
block, then select seeds on the encoded data."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bitmap, huffman
from .characterize import Characterization, Encoding, characterize
from .graph import Graph, assign_weights, transpose
from .memory import DECODE, ENCODED, FREQUENCY, RAW, MemoryTracker
from .sampling import SamplingPlan, estimate_theta, sample_block
from .selection import SeedSet, select_bitmax, select_huffmax, select_raw

__all__ = ["RunConfig", "RunStats", "run"]

MODES = ("auto", "huffman", "bitmap", "raw")


@dataclass
class RunConfig:
    k: int
    epsilon: float = 0.5
    blocks: int = 8
    mode: str = "auto"
    weight_model: Optional[str] = None  # None keeps the graph's probabilities
    p: Optional[float] = None
    rng_seed: int = 0
    workers: int = 1
    parallel_merge: bool = False
    theta: Optional[int] = None  # fixed sample count, skips estimation

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.blocks < 2:
            raise ValueError("blocks must be >= 2")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class RunStats:
    n: int
    m: int
    plan: SamplingPlan
    characterization: Characterization
    mode: Encoding
    mode_source: str
    seeds: SeedSet
    seconds: dict = field(default_factory=dict)
    blocks: list = field(default_factory=list)
    peak_bytes: int = 0
    memory: dict = field(default_factory=dict)
    huffman: Optional[dict] = None
    config: Optional[RunConfig] = None
    codebook: Optional[huffman.HuffmanCodebook] = None

    @property
    def theta(self) -> int:
        return self.plan.theta

    @property
    def raw_bytes(self) -> int:
        return sum(b["raw_bytes"] for b in self.blocks)

    @property
    def encoded_bytes(self) -> int:
        return sum(b["encoded_bytes"] for b in self.blocks)

    @property
    def compression_ratio(self) -> float:
        return self.raw_bytes / self.encoded_bytes if self.encoded_bytes else float("nan")

    def to_dict(self, labels=None) -> dict:
        cfg = self.config
        return {
            "n": self.n,
            "m": self.m,
            "k": cfg.k if cfg else len(self.seeds.seeds),
            "epsilon": self.plan.epsilon,
            "theta": self.theta,
            "blocks_requested": self.plan.b,
            "rng_seed": self.plan.rng_seed,
            "workers": cfg.workers if cfg else 1,
            "parallel_merge": cfg.parallel_merge if cfg else False,
            "estimation": {
                "iterations": self.plan.iterations,
                "samples_used": self.plan.samples_used,
                "lower_bound": self.plan.lower_bound,
            },
            "skewness": self.characterization.skewness,
            "density": self.characterization.density,
            "recommended_mode": self.characterization.mode.value,
            "mode": self.mode.value,
            "mode_source": self.mode_source,
            "seconds": self.seconds,
            "raw_bytes": self.raw_bytes,
            "encoded_bytes": self.encoded_bytes,
            "compression_ratio": self.compression_ratio,
            "peak_bytes": self.peak_bytes,
            "memory": self.memory,
            "blocks": self.blocks,
            "huffman": self.huffman,
            "padded_picks": sum(self.seeds.padded),
            "seeds": self.seeds.records(labels),
            "id_map": None if labels is None else labels.tolist(),
        }


def run(g: Graph, cfg: RunConfig) -> tuple[SeedSet, RunStats]:
    """Estimate, sample-and-encode in ``cfg.blocks`` blocks, then select.

    The first block is the warm-up: its size distribution picks the
    encoding (unless ``cfg.mode`` forces one) and, for Huffman, supplies
    the codebook. Every block, the warm-up included, is encoded and its
    raw sets released before the next one is drawn.
    """
    t_start = time.perf_counter()
    if cfg.weight_model is not None:
        g = assign_weights(g, cfg.weight_model, cfg.p)
    n = g.num_vertices
    if not 1 <= cfg.k < n:
        raise ValueError(f"need 1 <= k < n, got k={cfg.k}, n={n}")
    g_t = transpose(g)

    t = time.perf_counter()
    if cfg.theta is None:
        plan = estimate_theta(g, cfg.k, cfg.epsilon, cfg.rng_seed, cfg.blocks, cfg.workers, g_t=g_t)
    else:
        plan = SamplingPlan(cfg.theta, cfg.k, cfg.epsilon, cfg.blocks, cfg.rng_seed)
    seconds = {"estimate": time.perf_counter() - t, "sample": 0.0, "encode": 0.0}

    mem = MemoryTracker()
    hist = np.zeros(n, dtype=np.int64)
    mem.set(FREQUENCY, hist.nbytes)
    stored = []
    block_stats = []
    mode = None
    mode_source = "auto" if cfg.mode == "auto" else "override"
    codebook = None
    char = None

    for i, (a, b) in enumerate(plan.block_bounds(), start=1):
        t = time.perf_counter()
        blk = sample_block(g_t, b - a, i, cfg.rng_seed, start=a, workers=cfg.workers)
        seconds["sample"] += time.perf_counter() - t
        mem.add(RAW, blk.nbytes)
        mem.checkpoint(f"block {i} sampled")

        t = time.perf_counter()
        if i == 1:
            char = characterize(blk.sizes, n)
            mode = char.mode if cfg.mode == "auto" else Encoding(cfg.mode)
            if mode is Encoding.HUFFMAN:
                codebook = huffman.build_codebook(blk, n)
        hist += np.bincount(blk.members, minlength=n)
        if mode is Encoding.HUFFMAN:
            enc = huffman.encode_block(codebook, blk, int(np.argmax(hist)))
        elif mode is Encoding.BITMAP:
            enc = bitmap.encode_block(blk, n)
        else:
            enc = blk
        seconds["encode"] += time.perf_counter() - t

        stored.append(enc)
        mem.add(ENCODED, enc.nbytes)
        mem.checkpoint(f"block {i} encoded")
        mem.release(RAW, blk.nbytes)
        block_stats.append({"index": i, "count": len(blk), "raw_bytes": blk.nbytes, "encoded_bytes": enc.nbytes})
        del blk, enc

    t = time.perf_counter()
    mem.set(FREQUENCY, hist.nbytes * (1 + cfg.workers))
    if mode is Encoding.HUFFMAN:
        seeds = select_huffmax(codebook, stored, hist, cfg.k, cfg.workers, cfg.parallel_merge)
        mem.set(DECODE, seeds.decode_buffer_bytes)
    elif mode is Encoding.BITMAP:
        seeds = select_bitmax(stored, hist, cfg.k, cfg.workers, cfg.parallel_merge)
    else:
        seeds = select_raw(stored, cfg.k, n=n, workers=cfg.workers, parallel_merge=cfg.parallel_merge)
    mem.checkpoint("selection")
    seconds["select"] = time.perf_counter() - t
    seconds["total"] = time.perf_counter() - t_start

    huff_stats = None
    if mode is Encoding.HUFFMAN:
        copied = np.concatenate([e.copied for e in stored])
        huff_stats = {
            "coded_vertices": len(codebook),
            "uncoded_vertices": int(np.unique(copied).size),
            "uncoded_fraction": float(np.unique(copied).size) / n,
            "copied_occurrences": int(copied.size),
        }

    stats = RunStats(
        n=n, m=g.num_edges, plan=plan, characterization=char, mode=mode,
        mode_source=mode_source, seeds=seeds, seconds=seconds, blocks=block_stats,
        peak_bytes=mem.peak, memory=mem.track_memory(), huffman=huff_stats, config=cfg,
        codebook=codebook,
    )
    return seeds, stats
