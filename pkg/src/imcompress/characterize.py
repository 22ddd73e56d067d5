"""Shape statistics of RRR size distributions and the encoding choice."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Encoding",
    "Characterization",
    "DENSITY_THRESHOLD",
    "skewness",
    "density",
    "choose_encoding",
    "characterize",
]

# With 32-bit vertex ids, a dense bit matrix only beats explicit id
# lists when more than one cell in 32 is set.
DENSITY_THRESHOLD = 1.0 / 32.0


class Encoding(str, enum.Enum):
    HUFFMAN = "huffman"
    BITMAP = "bitmap"
    RAW = "raw"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Characterization:
    skewness: float
    density: float
    mode: Encoding

    def to_dict(self):
        return {"skewness": self.skewness, "density": self.density, "mode": self.mode.value}


def skewness(sizes) -> float:
    """Third standardized moment with population (1/N) moments.

    Returns 0.0 for a constant sequence.
    """
    x = np.asarray(sizes, dtype=np.float64)
    if x.size < 2:
        raise ValueError("skewness needs at least two sizes")
    d = x - x.mean()
    m2 = np.mean(d * d)
    if m2 == 0.0:
        return 0.0
    m3 = np.mean(d * d * d)
    return float(m3 / m2 ** 1.5)


def density(sizes, n: int) -> float:
    """Fraction of set cells in the n-by-len(sizes) membership matrix."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.asarray(sizes, dtype=np.int64)
    if x.size == 0:
        raise ValueError("density needs at least one size")
    return float(x.sum()) / (x.size * n)


def choose_encoding(S: float, D: float) -> Encoding:
    if S >= 0:
        return Encoding.HUFFMAN
    if D > DENSITY_THRESHOLD:
        return Encoding.BITMAP
    return Encoding.RAW


def characterize(sizes, n: int) -> Characterization:
    sizes = np.asarray(sizes)
    S = skewness(sizes) if sizes.size >= 2 else 0.0
    D = density(sizes, n)
    return Characterization(S, D, choose_encoding(S, D))
