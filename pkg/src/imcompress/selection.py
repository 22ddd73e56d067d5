"""Greedy max-coverage seed selection over raw, Huffman and bitmap storage.

All three selectors share one argmax rule (lowest vertex id wins ties)
and recount the frequency table from live data every round, so for the
same RRR sets they return the same seeds. With ``workers > 1`` the data
is partitioned and each worker fills its own frequency table. The tables
are either summed (exact argmax) or combined with :func:`merged_argmax`,
which only reduces the per-worker winners.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numba as nb
import numpy as np

from .bitmap import BitmapBlock, snapshot_row, subtract_rows
from .huffman import EncodedBlock, HuffmanCodebook, HuffmanDecodeError, _decode_find
from .sampling import RRRBlock

__all__ = [
    "SeedSet",
    "merged_argmax",
    "select_raw",
    "select_huffmax",
    "select_bitmax",
]


@dataclass
class SeedSet:
    seeds: list[int] = field(default_factory=list)
    marginals: list[int] = field(default_factory=list)
    num_sets: int = 0
    padded: list[bool] = field(default_factory=list)
    decode_buffer_bytes: int = 0

    @property
    def coverage(self) -> list[float]:
        if not self.num_sets:
            return [0.0] * len(self.seeds)
        return (np.cumsum(self.marginals) / self.num_sets).tolist()

    @property
    def any_padded(self) -> bool:
        return any(self.padded)

    def records(self, labels=None) -> list[dict]:
        out = []
        for s, m, c in zip(self.seeds, self.marginals, self.coverage):
            ident = s if labels is None else labels[s].item()
            out.append({"id": ident, "marginal": m / self.num_sets if self.num_sets else 0.0, "cumulative": c})
        return out


def merged_argmax(locals_) -> int:
    """Argmax over the per-worker winners only.

    Each worker nominates its locally most frequent vertex; the nominees'
    counts are summed across workers and the best nominee wins. Ties go
    to the lowest vertex id at both stages.
    """
    tables = np.atleast_2d(np.asarray(locals_))
    winners = np.unique(tables.argmax(axis=1))
    totals = tables[:, winners].sum(axis=0)
    return int(winners[np.argmax(totals)])


def _pick(hist: np.ndarray, chosen: set) -> tuple[int, bool]:
    """Global argmax; when nothing is left, the lowest unchosen id (padded)."""
    u = int(np.argmax(hist))
    if hist[u] > 0:
        return u, False
    for v in range(hist.size):
        if v not in chosen:
            return v, True
    raise ValueError("k exceeds the number of vertices")


def _pick_from(tables: np.ndarray, chosen: set, parallel_merge: bool) -> tuple[int, bool]:
    if parallel_merge and tables.shape[0] > 1:
        u = merged_argmax(tables)
        if tables[:, u].sum() > 0:
            return u, False
    return _pick(tables.sum(axis=0), chosen)


def _split(count: int, parts: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, count, parts + 1).astype(np.int64)
    return list(zip(edges[:-1].tolist(), edges[1:].tolist()))


def _pool(workers: int):
    return ThreadPoolExecutor(max_workers=workers) if workers > 1 else nullcontext()


def _run(pool, fn, items):
    if pool is None:
        return [fn(x) for x in items]
    return list(pool.map(fn, items))


def _as_block(sets) -> RRRBlock:
    if isinstance(sets, RRRBlock):
        return sets
    sets = list(sets)
    if sets and all(isinstance(s, RRRBlock) for s in sets):
        return RRRBlock.concat(sets)
    return RRRBlock.from_sets([list(s) for s in sets])


def select_raw(
    sets: Union[RRRBlock, Sequence[RRRBlock], Sequence[Sequence[int]]],
    k: int,
    n: Optional[int] = None,
    workers: int = 1,
    parallel_merge: bool = False,
) -> SeedSet:
    """Baseline greedy max-coverage on uncompressed sets."""
    blk = _as_block(sets)
    nsets = len(blk)
    if nsets < 1:
        raise ValueError("need at least one RRR set")
    members = blk.members
    if n is None:
        n = int(members.max()) + 1
    set_id = np.repeat(np.arange(nsets, dtype=np.int64), blk.sizes)
    live = np.ones(nsets, dtype=bool)
    parts = [(int(blk.offsets[a]), int(blk.offsets[b])) for a, b in _split(nsets, max(1, workers))]

    def count(part):
        a, b = part
        keep = live[set_id[a:b]]
        return np.bincount(members[a:b][keep], minlength=n)

    result = SeedSet(num_sets=nsets)
    chosen: set = set()
    with _pool(workers) as pool:
        for _ in range(k):
            tables = np.vstack(_run(pool, count, parts))
            u, pad = _pick_from(tables, chosen, parallel_merge)
            hits = set_id[members == u]
            hits = hits[live[hits]]
            live[hits] = False
            chosen.add(u)
            result.seeds.append(u)
            result.marginals.append(int(hits.size))
            result.padded.append(pad)
    return result


@nb.njit(nogil=True, cache=True)
def _huffmax_scan(data, byte_off, bit_len, copied, copied_off, deleted, lo, hi,
                  children, symbols, u_star, hist, tmp):
    """Delete live sets holding ``u_star``; count members of the others.

    Returns ``(removed, bad)`` where ``bad`` is the index of a corrupt
    payload or -1.
    """
    removed = 0
    for j in range(lo, hi):
        if deleted[j]:
            continue
        status, count = _decode_find(data, byte_off[j], bit_len[j], children, symbols, u_star, tmp)
        if status < 0:
            return removed, j
        found = status == 1
        if not found:
            for t in range(copied_off[j], copied_off[j + 1]):
                if copied[t] == u_star:
                    found = True
                    break
        if found:
            deleted[j] = True
            removed += 1
        else:
            for t in range(count):
                hist[tmp[t]] += 1
            for t in range(copied_off[j], copied_off[j + 1]):
                hist[copied[t]] += 1
    return removed, -1


def select_huffmax(
    codebook: HuffmanCodebook,
    encoded: Union[EncodedBlock, Sequence[EncodedBlock]],
    hist: np.ndarray,
    k: int,
    workers: int = 1,
    parallel_merge: bool = False,
) -> SeedSet:
    """Greedy selection on Huffman payloads with early-stop decoding.

    ``hist`` is the frequency table gathered while encoding. Each round a
    set is decoded only until the current pick appears; sets that do not
    contain it are decoded fully into a scratch buffer and counted.
    """
    blocks = [encoded] if isinstance(encoded, EncodedBlock) else list(encoded)
    given = np.asarray(hist, dtype=np.int64)
    n = max(given.size, codebook.lengths.size)
    hist = np.zeros(n, dtype=np.int64)
    hist[:given.size] = given
    deleted = [np.zeros(len(b), dtype=bool) for b in blocks]
    max_bits = max((int(b.bit_lengths.max()) for b in blocks if len(b)), default=0)
    p = max(1, workers)
    scratch = [np.empty(max(max_bits, 1), dtype=np.int32) for _ in range(p)]
    splits = [_split(len(b), p) for b in blocks]

    result = SeedSet(num_sets=sum(len(b) for b in blocks), decode_buffer_bytes=4 * max_bits * p)
    chosen: set = set()
    u, pad = _pick(hist, chosen)

    with _pool(workers) as pool:
        for it in range(k):
            tables = np.zeros((p, n), dtype=np.int64)

            def scan(w):
                removed = 0
                for bi, b in enumerate(blocks):
                    lo, hi = splits[bi][w]
                    r, bad = _huffmax_scan(
                        b.data, b.byte_offsets, b.bit_lengths, b.copied, b.copied_offsets,
                        deleted[bi], lo, hi, codebook.children, codebook.symbols,
                        np.int64(u), tables[w], scratch[w],
                    )
                    if bad >= 0:
                        raise HuffmanDecodeError(f"corrupt payload in block {b.block_index}, set {bad}")
                    removed += r
                return removed

            removed = sum(_run(pool, scan, range(p)))
            chosen.add(u)
            result.seeds.append(u)
            result.marginals.append(int(removed))
            result.padded.append(pad)
            if it + 1 < k:
                u, pad = _pick_from(tables, chosen, parallel_merge)
    return result


def select_bitmax(
    bitmaps: Union[BitmapBlock, Sequence[BitmapBlock]],
    hist: np.ndarray,
    k: int,
    workers: int = 1,
    parallel_merge: bool = False,
) -> SeedSet:
    """Greedy selection with row subtraction on bit matrices (mutates them).

    The pick's row is copied before any row is touched, then subtracted
    from every live row. Rows whose popcount drops to zero are flagged
    and skipped afterwards. Word columns are split across workers.
    """
    blocks = [bitmaps] if isinstance(bitmaps, BitmapBlock) else list(bitmaps)
    n = blocks[0].n_rows
    hist = np.asarray(hist, dtype=np.int64)
    p = max(1, workers)
    splits = [[slice(a, b) for a, b in _split(bm.words.shape[1], p)] for bm in blocks]
    dead = np.zeros(n, dtype=bool)

    result = SeedSet(num_sets=sum(bm.n_cols for bm in blocks))
    chosen: set = set()
    u, pad = _pick(hist, chosen)

    with _pool(workers) as pool:
        for it in range(k):
            snap = snapshot_row(blocks, u)
            live = np.flatnonzero(~dead)
            tables = np.zeros((p, n), dtype=np.int64)

            def work(w):
                for bi, bm in enumerate(blocks):
                    tables[w, live] += subtract_rows(bm, snap[bi], live, splits[bi][w])

            _run(pool, work, range(p))
            marginal = sum(int(np.bitwise_count(s).sum()) for s in snap)
            dead[live[tables[:, live].sum(axis=0) == 0]] = True
            chosen.add(u)
            result.seeds.append(u)
            result.marginals.append(marginal)
            result.padded.append(pad)
            if it + 1 < k:
                u, pad = _pick_from(tables, chosen, parallel_merge)
    return result
