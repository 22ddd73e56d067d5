"""Directed weighted graphs in compressed-sparse-row form.

Vertices are dense integer ids in ``[0, n)``. Every edge carries an
activation probability used by the independent cascade model.
"""
from __future__ import annotations

import io
import os
import struct
from dataclasses import dataclass, replace
from typing import BinaryIO, Optional, Union

import numpy as np

__all__ = [
    "Graph",
    "from_edges",
    "load_edge_list",
    "transpose",
    "assign_weights",
    "in_degrees",
    "write_binary",
    "read_binary",
    "BINARY_MAGIC",
    "GraphFormatError",
]

BINARY_MAGIC = b"IMMXG1"


class GraphFormatError(ValueError):
    """Raised when an edge list or binary cache cannot be parsed."""


@dataclass(frozen=True)
class Graph:
    offsets: np.ndarray
    targets: np.ndarray
    probs: np.ndarray
    labels: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        targets = np.ascontiguousarray(self.targets, dtype=np.int32)
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "probs", probs)
        n = offsets.size - 1
        if n < 0 or offsets[0] != 0 or offsets[-1] != targets.size:
            raise ValueError("offsets must start at 0 and end at the edge count")
        if np.any(np.diff(offsets) < 0):
            raise ValueError("offsets must be nondecreasing")
        if probs.size != targets.size:
            raise ValueError("probs and targets must have equal length")
        if targets.size and (targets.min() < 0 or targets.max() >= n):
            raise ValueError("target id out of range")
        if probs.size and (probs.min() < 0.0 or probs.max() > 1.0):
            raise ValueError("edge probabilities must lie in [0, 1]")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels must have one entry per vertex")

    @property
    def num_vertices(self) -> int:
        return self.offsets.size - 1

    @property
    def num_edges(self) -> int:
        return self.targets.size

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v]:self.offsets[v + 1]]

    def edges(self):
        """Return ``(src, dst, prob)`` arrays in CSR order."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int32), self.out_degrees())
        return src, self.targets, self.probs

    def label(self, v: int):
        return int(v) if self.labels is None else self.labels[v].item()


def from_edges(src, dst, n: Optional[int] = None, probs=None, labels=None, weights=None) -> Graph:
    """Build a CSR graph from parallel edge arrays.

    Adjacency order follows input order (stable sort on source). No
    deduplication happens here; :func:`load_edge_list` handles that.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.shape != dst.shape:
        raise ValueError("src and dst must have the same shape")
    if n is None:
        n = int(max(src.max(initial=-1), dst.max(initial=-1)) + 1)
    if probs is None:
        probs = np.ones(src.size)
    probs = np.asarray(probs, dtype=np.float64)
    order = np.argsort(src, kind="stable")
    counts = np.bincount(src, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    w = None if weights is None else np.asarray(weights, dtype=np.float64)[order]
    return Graph(offsets, dst[order], probs[order], labels=labels, weights=w)


def _open_source(source) -> BinaryIO:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb")
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source)
    return source


def load_edge_list(
    source: Union[str, os.PathLike, bytes, BinaryIO],
    directed: bool = True,
    weight_model: Optional[str] = "weighted-cascade",
    p: Optional[float] = None,
) -> Graph:
    """Parse a SNAP-style ``src dst [weight]`` edge list.

    Lines starting with ``#`` and blank lines are skipped. Self-loops are
    dropped and duplicate edges collapse onto their first occurrence.
    Vertex ids are densified in first-seen order and the original ids
    are kept in ``Graph.labels``.

    Edge probabilities are set with :func:`assign_weights` using
    ``weight_model`` (pass ``None`` to leave every probability at 1).
    """
    stream = _open_source(source)
    close = stream is not source
    ids: dict[int, int] = {}
    labels: list[int] = []
    seen: set[tuple[int, int]] = set()
    src: list[int] = []
    dst: list[int] = []
    wts: list[float] = []
    has_weight = None

    def dense(token: int) -> int:
        d = ids.get(token)
        if d is None:
            d = ids[token] = len(labels)
            labels.append(token)
        return d

    def push(a: int, b: int, w: float):
        if (a, b) in seen:
            return
        seen.add((a, b))
        src.append(a)
        dst.append(b)
        wts.append(w)

    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.decode("utf-8", errors="strict").strip() if isinstance(raw, bytes) else raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(f"line {lineno}: expected 'src dst [weight]', got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-numeric field in {line!r}") from None
            if w < 0 or w != w:
                raise GraphFormatError(f"line {lineno}: weight must be nonnegative")
            if has_weight is None:
                has_weight = len(parts) == 3
            da, db = dense(a), dense(b)
            if da == db:
                continue
            push(da, db, w)
            if not directed:
                push(db, da, w)
    finally:
        if close:
            stream.close()

    if not src:
        raise GraphFormatError("edge list contains no edges")
    g = from_edges(
        src, dst, n=len(labels),
        labels=np.asarray(labels, dtype=np.int64),
        weights=np.asarray(wts) if has_weight else None,
    )
    if weight_model is not None:
        g = assign_weights(g, weight_model, p)
    return g


def transpose(g: Graph) -> Graph:
    """Reverse every edge, carrying its probability along."""
    src, dst, probs = g.edges()
    return from_edges(dst, src, n=g.num_vertices, probs=probs, labels=g.labels, weights=g.weights)


def in_degrees(g: Graph) -> np.ndarray:
    return np.bincount(g.targets, minlength=g.num_vertices)


def assign_weights(g: Graph, model: str = "weighted-cascade", p: Optional[float] = None) -> Graph:
    """Set IC activation probabilities.

    ``uniform`` gives every edge probability ``p``; ``weighted-cascade``
    gives edge ``(u, v)`` probability ``1 / indeg(v)``.
    """
    model = model.lower().replace("_", "-")
    if model == "uniform":
        if p is None or not 0.0 <= p <= 1.0:
            raise ValueError(f"uniform model needs p in [0, 1], got {p!r}")
        probs = np.full(g.num_edges, float(p))
    elif model in ("weighted-cascade", "wc"):
        indeg = in_degrees(g)
        probs = 1.0 / indeg[g.targets] if g.num_edges else np.zeros(0)
    else:
        raise ValueError(f"unknown weight model {model!r}")
    return replace(g, probs=probs)


_HEADER = struct.Struct("<6sQQ")


def write_binary(g: Graph, path) -> None:
    """Write the ``IMMXG1`` cache: magic, n, m, offsets, targets, probs.

    Layout is little-endian: u64 n, u64 m, u64[n+1] offsets, u32[m]
    targets, f64[m] probs. Labels are not stored.
    """
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, g.num_vertices, g.num_edges))
        fh.write(g.offsets.astype("<u8").tobytes())
        fh.write(g.targets.astype("<u4").tobytes())
        fh.write(g.probs.astype("<f8").tobytes())


def read_binary(path) -> Graph:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise GraphFormatError("truncated binary graph header")
        magic, n, m = _HEADER.unpack(head)
        if magic != BINARY_MAGIC:
            raise GraphFormatError(f"bad magic {magic!r}")
        body = fh.read()
    need = 8 * (n + 1) + 4 * m + 8 * m
    if len(body) != need:
        raise GraphFormatError(f"binary graph body has {len(body)} bytes, expected {need}")
    offsets = np.frombuffer(body, "<u8", n + 1, 0).astype(np.int64)
    targets = np.frombuffer(body, "<u4", m, 8 * (n + 1)).astype(np.int32)
    probs = np.frombuffer(body, "<f8", m, 8 * (n + 1) + 4 * m).astype(np.float64)
    return Graph(offsets, targets, probs)

