import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imcompress.huffman import (
    HuffmanCodebook,
    HuffmanDecodeError,
    EncodedRRR,
    build_codebook,
    decode,
    decode_find,
    encode_block,
    encode_rrr,
)
from imcompress.sampling import RRRBlock
from oracles import huffman_cost, multiset

A, B, C, X = 0, 1, 2, 9


def lengths(cb, vs):
    return {v: cb.code_of(v)[1] for v in vs}


def test_lengths_textbook():
    cb = HuffmanCodebook.from_frequencies({A: 5, B: 2, C: 1})
    assert lengths(cb, [A, B, C]) == {A: 1, B: 2, C: 2}
    cb = HuffmanCodebook.from_frequencies({0: 1, 1: 1, 2: 1, 3: 1})
    assert set(lengths(cb, range(4)).values()) == {2}


def test_single_symbol_gets_one_bit():
    cb = HuffmanCodebook.from_frequencies({A: 7})
    assert cb.code_of(A) == (0, 1)
    rt = encode_rrr(cb, [A])
    assert rt.bit_length == 1
    assert decode(cb, rt).tolist() == [A]


def test_construction_is_deterministic():
    freqs = {3: 4, 1: 4, 7: 4, 2: 4, 5: 1}
    a = HuffmanCodebook.from_frequencies(freqs)
    b = HuffmanCodebook.from_frequencies(dict(reversed(list(freqs.items()))))
    assert np.array_equal(a.codes, b.codes) and np.array_equal(a.lengths, b.lengths)


def test_zero_frequencies_rejected():
    with pytest.raises(ValueError):
        HuffmanCodebook.from_frequencies({A: 0})


def test_prefix_violation_rejected():
    with pytest.raises(ValueError):
        HuffmanCodebook.from_codes({A: "1", B: "10"})


def test_encode_swaps_u_star_to_front():
    cb = HuffmanCodebook.from_codes({A: "0", B: "10", C: "11"})
    enc = encode_rrr(cb, [B, A, C], u_star=A)
    # a, b, c -> 0 10 11
    assert enc.bit_length == 5
    assert enc.bits == bytes([0b01011000])
    assert decode(cb, enc).tolist() == [A, B, C]


def test_swap_is_a_single_exchange():
    cb = HuffmanCodebook.from_codes({A: "00", B: "01", C: "10", 3: "11"})
    enc = encode_rrr(cb, [B, C, 3, A, X], u_star=A)
    assert decode(cb, enc).tolist() == [A, C, 3, B, X]
    enc = encode_rrr(cb, [X, B, C, A], u_star=A)
    assert decode(cb, enc).tolist() == [A, C, B, X]


def test_encode_absent_u_star_keeps_order():
    cb = HuffmanCodebook.from_codes({A: "0", B: "10", C: "11"})
    enc = encode_rrr(cb, [C, B], u_star=A)
    assert decode(cb, enc).tolist() == [C, B]


def test_uncoded_vertex_goes_to_copied():
    cb = HuffmanCodebook.from_codes({A: "0", B: "10", C: "11"})
    enc = encode_rrr(cb, [B, X, A], u_star=X)
    assert enc.copied.tolist() == [X]
    assert enc.bit_length == 3
    assert decode(cb, enc).tolist() == [B, A, X]


def test_decode_find_examples():
    cb = HuffmanCodebook.from_codes({A: "0", B: "10", C: "11"})
    assert [(f, d.tolist()) for f, d in [decode_find(cb, encode_rrr(cb, [A, B, C], A), A)]] == [(True, [A])]
    found, dec = decode_find(cb, encode_rrr(cb, [B, C], A), A)
    assert (found, dec.tolist()) == (False, [B, C])
    found, dec = decode_find(cb, encode_rrr(cb, [B, X, C], X), X)
    assert (found, dec.tolist()) == (True, [B, C])


def test_truncated_stream_is_corrupt():
    cb = HuffmanCodebook.from_codes({A: "0", B: "10", C: "11"})
    enc = encode_rrr(cb, [B, C])
    with pytest.raises(HuffmanDecodeError):
        decode(cb, EncodedRRR(enc.bits, enc.bit_length - 1, enc.copied))


def test_block_encoding_matches_per_set():
    sets = [[0, 3, 1], [2], [4, 0], [5, 6, 0, 1]]
    blk = RRRBlock.from_sets(sets)
    cb = build_codebook(RRRBlock.from_sets(sets[:3]), n=7)
    eb = encode_block(cb, blk, u_star=0)
    assert len(eb) == 4
    for j, s in enumerate(sets):
        one = encode_rrr(cb, s, u_star=0)
        assert eb[j].bits == one.bits
        assert eb[j].bit_length == one.bit_length
        assert eb[j].copied.tolist() == one.copied.tolist()
    assert eb.nbytes == eb.data.size + 4 * eb.copied.size
    assert eb[3].copied.tolist() == [5, 6]


def test_dump_lists_codes():
    cb = HuffmanCodebook.from_codes({A: "0", B: "10", C: "11"})
    buf = io.StringIO()
    cb.dump(buf)
    assert buf.getvalue() == "0 1 0\n1 2 10\n2 2 11\n"


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(st.integers(0, 200), st.integers(1, 1000), min_size=2, max_size=60))
def test_codebook_optimal_prefix_free_complete(freqs):
    cb = HuffmanCodebook.from_frequencies(freqs)
    assert cb.kraft_sum() == 1.0
    cost = sum(c * cb.code_of(v)[1] for v, c in freqs.items())
    assert cost == huffman_cost(list(freqs.values()))
    words = sorted(cb.bitstring(v) for v in freqs)
    assert all(not b.startswith(a) for a, b in zip(words, words[1:]))


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(0, 40), min_size=1, max_size=40, unique=True),
    st.dictionaries(st.integers(0, 30), st.integers(1, 50), min_size=1, max_size=30),
    st.integers(-1, 45),
)
def test_roundtrip(members, freqs, u_star):
    cb = HuffmanCodebook.from_frequencies(freqs, size=41)
    enc = encode_rrr(cb, members, None if u_star < 0 else u_star)
    out = decode(cb, enc)
    assert multiset(out) == multiset(members)
    coded = [v for v in members if v in cb]
    if u_star in coded:
        i = coded.index(u_star)
        coded[0], coded[i] = coded[i], coded[0]
    assert out[:len(coded)].tolist() == coded
    found, _ = decode_find(cb, enc, u_star)
    assert found == (u_star in members)
