"""Logical memory accounting.

Sizes are what the containers hold (ids at 4 bytes, bitmap words,
Huffman payload bytes), not process RSS, so runs are reproducible.
"""
from __future__ import annotations

from collections import OrderedDict

RAW = "raw_blocks"
ENCODED = "encoded"
FREQUENCY = "frequency_table"
DECODE = "decode_buffers"


class MemoryTracker:
    def __init__(self):
        self.current: OrderedDict[str, int] = OrderedDict((c, 0) for c in (RAW, ENCODED, FREQUENCY, DECODE))
        self.peak = 0
        self.checkpoints: list[tuple[str, int]] = []

    @property
    def total(self) -> int:
        return sum(self.current.values())

    def _bump(self):
        self.peak = max(self.peak, self.total)

    def set(self, category: str, nbytes: int) -> None:
        self.current[category] = int(nbytes)
        self._bump()

    def add(self, category: str, nbytes: int) -> None:
        self.current[category] = self.current.get(category, 0) + int(nbytes)
        self._bump()

    def release(self, category: str, nbytes: int | None = None) -> None:
        if nbytes is None:
            self.current[category] = 0
        else:
            self.current[category] -= int(nbytes)
            if self.current[category] < 0:
                raise ValueError(f"released more {category} bytes than held")

    def checkpoint(self, label: str) -> None:
        self.checkpoints.append((label, self.total))

    def track_memory(self) -> dict:
        """Current bytes per category, with total and peak."""
        out = dict(self.current)
        out["total"] = self.total
        out["peak"] = self.peak
        return out


def rss_bytes() -> int | None:
    """Resident set size of this process, informational only."""
    try:
        import resource
    except ImportError:
        return None
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
