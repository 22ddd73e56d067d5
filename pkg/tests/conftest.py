import re

import numpy as np
import pytest

from imcompress.graph import assign_weights, from_edges

ACCEPTANCE = {}


def random_graph(rng, n, m, probs=None, model="weighted-cascade"):
    """Random simple digraph: no self-loops, duplicates removed."""
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    keep = src != dst
    pairs = np.unique(np.stack([src[keep], dst[keep]], axis=1), axis=0)
    if probs is not None:
        return from_edges(pairs[:, 0], pairs[:, 1], n=n, probs=np.full(len(pairs), probs))
    g = from_edges(pairs[:, 0], pairs[:, 1], n=n)
    return assign_weights(g, model) if model else g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: (int(re.match(r"\d+", s).group()), s)):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{status}] {key}: {detail}")
