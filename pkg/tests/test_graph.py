import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imcompress.graph import (
    BINARY_MAGIC,
    Graph,
    GraphFormatError,
    assign_weights,
    from_edges,
    in_degrees,
    load_edge_list,
    read_binary,
    transpose,
    write_binary,
)


def edge_set(g):
    src, dst, probs = g.edges()
    return sorted(zip(src.tolist(), dst.tolist(), probs.tolist()))


def test_load_directed_chain():
    g = load_edge_list(b"0 1\n1 2\n", weight_model=None)
    assert (g.num_vertices, g.num_edges) == (3, 2)
    assert g.neighbors(0).tolist() == [1]
    assert g.neighbors(1).tolist() == [2]
    assert g.neighbors(2).tolist() == []


def test_load_undirected_symmetrizes():
    g = load_edge_list(b"0 1\n", directed=False, weight_model=None)
    assert (g.num_vertices, g.num_edges) == (2, 2)
    assert [(s, d) for s, d, _ in edge_set(g)] == [(0, 1), (1, 0)]


def test_duplicates_collapse_keep_first_weight():
    g = load_edge_list(b"0 1 0.5\n0 1 0.9\n", weight_model=None)
    assert g.num_edges == 1
    assert g.weights.tolist() == [0.5]


def test_comments_selfloops_and_sparse_ids():
    text = b"# header\n\n100 7\n7 7\n7 42\n"
    g = load_edge_list(io.BytesIO(text), weight_model=None)
    assert g.num_vertices == 3
    assert g.labels.tolist() == [100, 7, 42]
    assert [(s, d) for s, d, _ in edge_set(g)] == [(0, 1), (1, 2)]


def test_load_from_path(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("1 2\n2 3\n")
    assert load_edge_list(p).num_edges == 2


@pytest.mark.parametrize("text,line", [(b"0 1\n0\n", 2), (b"0 x\n", 1), (b"0 1 2 3\n", 1), (b"0 1 -1\n", 1)])
def test_malformed_line_reports_number(text, line):
    with pytest.raises(GraphFormatError, match=f"line {line}"):
        load_edge_list(text)


def test_empty_graph_errors():
    with pytest.raises(GraphFormatError):
        load_edge_list(b"# nothing\n")
    with pytest.raises(GraphFormatError):
        load_edge_list(b"3 3\n")


def test_invariants_enforced():
    with pytest.raises(ValueError):
        Graph(np.array([0, 2, 1]), np.array([1, 0]), np.array([0.1, 0.1]))
    with pytest.raises(ValueError):
        Graph(np.array([0, 1]), np.array([3]), np.array([0.1]))
    with pytest.raises(ValueError):
        Graph(np.array([0, 1, 1]), np.array([1]), np.array([1.5]))


def test_transpose_reverses_and_carries_probs():
    g = from_edges([0, 1], [1, 2], probs=[0.3, 0.7])
    gt = transpose(g)
    assert edge_set(gt) == [(1, 0, 0.3), (2, 1, 0.7)]
    assert gt.out_degrees().tolist() == [0, 1, 1]


def test_isolated_vertex_keeps_degree_zero():
    g = from_edges([0], [1], n=3)
    assert g.out_degrees()[2] == 0
    assert transpose(g).out_degrees()[2] == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15), st.floats(0, 1)), min_size=1, max_size=60))
def test_transpose_involution_and_degree_sums(edges):
    src, dst, p = zip(*edges)
    g = from_edges(src, dst, n=16, probs=p)
    gt = transpose(g)
    assert edge_set(transpose(gt)) == edge_set(g)
    assert g.out_degrees().sum() == g.num_edges
    assert in_degrees(g).sum() == g.num_edges
    assert np.array_equal(gt.out_degrees(), in_degrees(g))


def test_uniform_weights():
    g = assign_weights(from_edges([0, 1, 2], [1, 2, 0]), "uniform", 0.1)
    assert np.all(g.probs == 0.1)
    with pytest.raises(ValueError):
        assign_weights(g, "uniform", 1.5)
    with pytest.raises(ValueError):
        assign_weights(g, "uniform")
    with pytest.raises(ValueError):
        assign_weights(g, "bogus")


def test_weighted_cascade():
    # vertex 4 has in-degree 4, vertex 0 has in-degree 1
    g = assign_weights(from_edges([0, 1, 2, 3, 1], [4, 4, 4, 4, 0]), "weighted-cascade")
    src, dst, probs = g.edges()
    assert probs[dst == 4].tolist() == [0.25] * 4
    assert probs[dst == 0].tolist() == [1.0]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), min_size=1, max_size=100))
def test_weighted_cascade_in_probs_sum_to_one(edges):
    src, dst = zip(*edges)
    g = assign_weights(from_edges(src, dst, n=21), "wc")
    _, d, probs = g.edges()
    sums = np.bincount(d, weights=probs, minlength=21)
    has_in = in_degrees(g) > 0
    assert np.allclose(sums[has_in], 1.0, atol=1e-9)


def test_load_applies_weighted_cascade_by_default():
    g = load_edge_list(b"0 2\n1 2\n")
    assert g.probs.tolist() == [0.5, 0.5]


def test_binary_roundtrip(tmp_path):
    g = assign_weights(from_edges([0, 0, 2, 3], [1, 2, 3, 1], n=5), "wc")
    path = tmp_path / "g.bin"
    write_binary(g, path)
    raw = path.read_bytes()
    assert raw[:6] == BINARY_MAGIC
    assert int.from_bytes(raw[6:14], "little") == 5
    assert int.from_bytes(raw[14:22], "little") == 4
    h = read_binary(path)
    assert np.array_equal(h.offsets, g.offsets)
    assert np.array_equal(h.targets, g.targets)
    assert np.array_equal(h.probs, g.probs)


def test_binary_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"NOTAGR" + bytes(16))
    with pytest.raises(GraphFormatError):
        read_binary(path)
