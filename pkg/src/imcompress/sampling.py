"""Reverse-reachable sampling under the independent cascade model.

Each sample ``j`` draws from its own SplitMix64 stream whose starting
state is a hash of ``(key, j)``. Because no state is shared between
samples, the output for a given range of sample indices is the same no
matter how the range is split across worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numba as nb
import numpy as np

from .graph import Graph, transpose

__all__ = [
    "RRRSet",
    "RRRBlock",
    "SamplingPlan",
    "derive_key",
    "sample_rrr",
    "sample_range",
    "sample_block",
    "theta_bound",
    "theta_value",
    "theta_from_lower_bound",
    "estimate_theta",
]

_MASK = (1 << 64) - 1
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

# stream purposes
PRODUCTION = 0
ESTIMATION = 1


@nb.njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(inline="always")
def _sample_state(key, j):
    return _mix64(key ^ _mix64(np.uint64(j)))


@nb.njit(inline="always")
def _uniform(z):
    return float(z >> _S11) * _INV53


@nb.njit(nogil=True, cache=True)
def _reverse_bfs(offsets, sources, probs, root, state, stamp, mark, buf, pos):
    """Randomized BFS from ``root``; appends visited ids to ``buf[pos:]``.

    Each in-edge is tried once, and only if its tail is not yet visited.
    ``buf`` must have room for ``n`` more entries.
    """
    head = pos
    buf[pos] = root
    pos += 1
    mark[root] = stamp
    while head < pos:
        u = buf[head]
        head += 1
        for e in range(offsets[u], offsets[u + 1]):
            v = sources[e]
            if mark[v] == stamp:
                continue
            state += _GAMMA
            if _uniform(_mix64(state)) < probs[e]:
                mark[v] = stamp
                buf[pos] = v
                pos += 1
    return pos, state


@nb.njit(nogil=True, cache=True)
def _sample_from_root(offsets, sources, probs, root, state):
    n = offsets.size - 1
    mark = np.full(n, -1, np.int64)
    buf = np.empty(n, np.int32)
    pos, _ = _reverse_bfs(offsets, sources, probs, root, state, 0, mark, buf, 0)
    return buf[:pos].copy()


@nb.njit(nogil=True, cache=True)
def _sample_range(offsets, sources, probs, key, start, stop):
    n = offsets.size - 1
    count = stop - start
    roots = np.empty(count, np.int32)
    set_offsets = np.empty(count + 1, np.int64)
    set_offsets[0] = 0
    cap = max(64, 4 * count, n)
    buf = np.empty(cap, np.int32)
    mark = np.full(n, -1, np.int64)
    pos = 0
    for t in range(count):
        j = start + t
        if pos + n > buf.size:
            grown = np.empty(max(2 * buf.size, pos + n), np.int32)
            grown[:pos] = buf[:pos]
            buf = grown
        state = _sample_state(key, j)
        state += _GAMMA
        root = int(_uniform(_mix64(state)) * n)
        if root >= n:
            root = n - 1
        roots[t] = root
        pos, state = _reverse_bfs(offsets, sources, probs, root, state, j, mark, buf, pos)
        set_offsets[t + 1] = pos
    return roots, set_offsets, buf[:pos].copy()


def _py_mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_key(rng_seed: int, purpose: int = PRODUCTION) -> int:
    """Stream key for a run seed and a purpose tag (production/estimation)."""
    return _py_mix64((rng_seed & _MASK) ^ _py_mix64(0xD1B54A32D192ED03 * (purpose + 1)))


@dataclass(frozen=True)
class RRRSet:
    root: int
    members: np.ndarray

    def __len__(self):
        return self.members.size

    def __contains__(self, v):
        return bool(np.any(self.members == v))


@dataclass
class RRRBlock:
    """A batch of RRR sets stored as one flat member array plus offsets."""

    roots: np.ndarray
    offsets: np.ndarray
    members: np.ndarray
    block_index: int = 1
    start: int = 0

    @classmethod
    def from_sets(cls, sets: Sequence[Sequence[int]], block_index: int = 1, start: int = 0) -> "RRRBlock":
        sizes = [len(s) for s in sets]
        offsets = np.zeros(len(sets) + 1, dtype=np.int64)
        np.cumsum(sizes, out=offsets[1:])
        members = np.fromiter((v for s in sets for v in s), dtype=np.int32, count=int(offsets[-1]))
        roots = np.array([s[0] if len(s) else -1 for s in sets], dtype=np.int32)
        return cls(roots, offsets, members, block_index, start)

    def __len__(self) -> int:
        return self.offsets.size - 1

    def __getitem__(self, j: int) -> RRRSet:
        return RRRSet(int(self.roots[j]), self.members[self.offsets[j]:self.offsets[j + 1]])

    def __iter__(self) -> Iterator[RRRSet]:
        for j in range(len(self)):
            yield self[j]

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def nbytes(self) -> int:
        """Logical footprint: one 32-bit id per stored member."""
        return 4 * int(self.members.size)

    @staticmethod
    def concat(blocks: Sequence["RRRBlock"]) -> "RRRBlock":
        if len(blocks) == 1:
            return blocks[0]
        sizes = np.concatenate([b.sizes for b in blocks])
        offsets = np.zeros(sizes.size + 1, dtype=np.int64)
        np.cumsum(sizes, out=offsets[1:])
        return RRRBlock(
            np.concatenate([b.roots for b in blocks]),
            offsets,
            np.concatenate([b.members for b in blocks]),
            blocks[0].block_index,
            blocks[0].start,
        )


@dataclass
class SamplingPlan:
    theta: int
    k: int
    epsilon: float
    b: int = 8
    rng_seed: int = 0
    iterations: int = 0
    samples_used: int = 0
    lower_bound: Optional[float] = None

    def __post_init__(self):
        if self.theta < 1:
            raise ValueError("theta must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.b < 2:
            raise ValueError("need at least two blocks (block 1 is the warm-up)")

    def block_bounds(self) -> list[tuple[int, int]]:
        """Global ``[start, stop)`` sample ranges, ``ceil(theta/b)`` per block."""
        size = -(-self.theta // self.b)
        return [(s, min(s + size, self.theta)) for s in range(0, self.theta, size)]


def _stream_seed(rng: Union[int, np.random.Generator]) -> int:
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 1 << 64, dtype=np.uint64))
    return int(rng) & _MASK


def sample_rrr(g_t: Graph, root: int, rng: Union[int, np.random.Generator]) -> RRRSet:
    """One randomized reverse BFS over the transposed graph ``g_t``."""
    if not 0 <= root < g_t.num_vertices:
        raise ValueError(f"root {root} out of range")
    members = _sample_from_root(
        g_t.offsets, g_t.targets, g_t.probs, np.int64(root), np.uint64(_stream_seed(rng))
    )
    return RRRSet(int(root), members)


def sample_range(g_t: Graph, key: int, start: int, stop: int, workers: int = 1):
    """Sample global indices ``[start, stop)``; returns ``(roots, offsets, members)``."""
    args = (g_t.offsets, g_t.targets, g_t.probs, np.uint64(key))
    count = stop - start
    if workers <= 1 or count < 2 * workers:
        return _sample_range(*args, np.int64(start), np.int64(stop))
    nchunks = min(count, 4 * workers)
    edges = np.linspace(start, stop, nchunks + 1).astype(np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda ab: _sample_range(*args, ab[0], ab[1]), zip(edges[:-1], edges[1:])))
    roots = np.concatenate([p[0] for p in parts])
    members = np.concatenate([p[2] for p in parts])
    sizes = np.concatenate([np.diff(p[1]) for p in parts])
    offsets = np.zeros(count + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    return roots, offsets, members


def sample_block(
    g_t: Graph,
    count: int,
    block_index: int,
    rng_seed: int,
    start: Optional[int] = None,
    workers: int = 1,
    purpose: int = PRODUCTION,
) -> RRRBlock:
    """Sample ``count`` RRR sets with uniformly random roots.

    ``start`` is the global index of the block's first sample and
    defaults to ``(block_index - 1) * count``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if start is None:
        start = (block_index - 1) * count
    key = derive_key(rng_seed, purpose)
    roots, offsets, members = sample_range(g_t, key, start, start + count, workers)
    return RRRBlock(roots, offsets, members, block_index, start)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _theta_scale(n: int, k: int, epsilon: float) -> float:
    """The doubling-free factor of the sample-count bound."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    ln_n = math.log(n)
    lead = 2.0 + 2.0 * math.sqrt(2.0) / 3.0 * epsilon
    return lead * (_log_binom(n, k) * ln_n + math.log(math.log2(n))) / (2.0 * epsilon * epsilon)


def theta_value(n: int, k: int, epsilon: float, i: int) -> float:
    """Unrounded sample count for doubling round ``i``.

    Natural logs throughout except the explicit ``log2``; the binomial
    coefficient goes through log-gamma.
    """
    if i < 1:
        raise ValueError("round index starts at 1")
    return _theta_scale(n, k, epsilon) * 2.0 ** i


def theta_bound(n: int, k: int, epsilon: float, i: int) -> int:
    return math.ceil(theta_value(n, k, epsilon, i))


def theta_from_lower_bound(n: int, k: int, epsilon: float, lower_bound: float) -> int:
    """Final sample count with ``n / LB`` replacing the ``2**i`` factor."""
    return math.ceil(_theta_scale(n, k, epsilon) * n / lower_bound)


def estimate_theta(
    g: Graph,
    k: int,
    epsilon: float,
    rng_seed: int = 0,
    b: int = 8,
    workers: int = 1,
    g_t: Optional[Graph] = None,
) -> SamplingPlan:
    """Martingale doubling search for the total sample count.

    Round ``i`` tops the sample pool up to ``theta_bound(..., i)``, runs
    greedy max-coverage for ``k`` seeds and stops once
    ``n * F >= (1 + sqrt(2) * eps) * n / 2**i``. The samples drawn here
    come from a separate stream and are thrown away afterwards.
    """
    from .selection import select_raw

    n = g.num_vertices
    if g_t is None:
        g_t = transpose(g)
    eps_prime = math.sqrt(2.0) * epsilon
    key = derive_key(rng_seed, ESTIMATION)
    rounds = max(1, math.ceil(math.log2(n)) - 1)

    pool: list[RRRBlock] = []
    drawn = 0
    theta_i = 0
    lower_bound = None
    i = 0
    for i in range(1, rounds + 1):
        theta_i = theta_bound(n, k, epsilon, i)
        if theta_i > drawn:
            roots, offsets, members = sample_range(g_t, key, drawn, theta_i, workers)
            pool.append(RRRBlock(roots, offsets, members, len(pool) + 1, drawn))
            drawn = theta_i
        seeds = select_raw(pool, k, n=n)
        covered = seeds.coverage[-1] if seeds.coverage else 0.0
        x_i = n / 2.0 ** i
        if n * covered >= (1.0 + eps_prime) * x_i:
            lower_bound = n * covered / (1.0 + eps_prime)
            break

    if lower_bound is None:
        theta = theta_i
    else:
        theta = max(theta_from_lower_bound(n, k, epsilon, lower_bound), drawn)
    return SamplingPlan(theta, k, epsilon, b, rng_seed, iterations=i, samples_used=drawn, lower_bound=lower_bound)
