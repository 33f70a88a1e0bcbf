import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marklab.errors import MarkingLengthMismatch, ResourceLimit
from marklab.group_core import SANOV_GENERATORS, CyclicGroup, FreeGroup, FreeWord, IntegerGroup, IntegerMatrixGroup, dihedral_group, symmetric_group
from marklab.marked_space import (
    MarkedGroup,
    ball,
    ball_adjacency_text,
    ball_digest,
    ball_encoding,
    marked_distance,
    norms_of,
    trivial_words,
    valuation,
    word_norm,
)

from oracles import all_reduced_words, cyclic_trivial_words, cyclic_valuation


def Z():
    return MarkedGroup(IntegerGroup(), (1,))


def Zm(m):
    return MarkedGroup(CyclicGroup(m), (1 % m,))


def F(k):
    f = FreeGroup(k)
    return MarkedGroup(f, f.generators())


def test_ball_examples():
    b0 = ball(F(2), 0)
    assert len(b0) == 1 and b0.edges == []
    for r in range(5):
        assert len(ball(F(2), r)) == 2 * 3**r - 1
    b = ball(Zm(3), 5)
    assert len(b) == 3
    assert len(b.edges) == 6
    assert {(s, l) for s, l, _ in b.edges} == {(v, l) for v in range(3) for l in (0, 1)}


def test_ball_canonical_order_and_in_edges():
    b = ball(F(2), 3)
    assert b.vertices[0] == FreeWord()
    keys = [(n, w.sort_key()) for n, w in zip(b.norms, b.words)]
    assert keys == sorted(keys)
    for v in range(1, len(b)):
        assert any(t == v and b.norms[s] == b.norms[v] - 1 for s, _, t in b.edges)


def test_ball_vertex_cap():
    with pytest.raises(ResourceLimit):
        ball(F(3), 6, cap=100)


def test_ball_prefix_property():
    for mg in (F(2), Zm(7), MarkedGroup(symmetric_group(4), symmetric_group(4).gens)):
        prev = ball(mg, 0)
        for r in range(1, 4):
            cur = ball(mg, r)
            assert cur.vertices[: len(prev)] == prev.vertices
            prev = cur


def test_encoding_examples():
    assert ball_encoding(ball(F(2), 2)) == ball_encoding(ball(F(2), 2))
    assert ball_encoding(ball(Z(), 2)) == ball_encoding(ball(Zm(7), 2))
    assert ball_encoding(ball(Z(), 3)) != ball_encoding(ball(Zm(7), 3))
    assert len(ball_digest(ball(Z(), 3))) == 64


def test_adjacency_text():
    text = ball_adjacency_text(ball(Zm(3), 1))
    lines = text.splitlines()
    assert len(lines) == 6
    assert "0 0 1" in lines and "0 0' 2" in lines


def test_trivial_words_examples():
    for mg in (Z(), Zm(5), F(2)):
        assert trivial_words(mg, 0).words == {FreeWord()}
    z5 = trivial_words(Zm(5), 5)
    assert z5.words == {FreeWord(w) for w in cyclic_trivial_words(5, 5)}
    assert z5.words == {FreeWord(), FreeWord.parse("a^5"), FreeWord.parse("a^-5")}
    sanov = MarkedGroup(IntegerMatrixGroup(2), SANOV_GENERATORS)
    assert trivial_words(sanov, 4).words == {FreeWord()}


def test_trivial_words_against_brute_force_on_s3():
    s3 = symmetric_group(3)
    mg = MarkedGroup(s3, s3.gens)
    from oracles import perm_compose

    inv = {g: tuple(sorted(range(3), key=lambda i: g[i])) for g in s3.gens}
    expected = set()
    for w in all_reduced_words(2, 5):
        g = (0, 1, 2)
        for i, s in w:
            h = s3.gens[i] if s > 0 else inv[s3.gens[i]]
            g = perm_compose(g, h)
        if g == (0, 1, 2):
            expected.add(FreeWord(w))
    assert trivial_words(mg, 5).words == expected


def test_trivial_words_cap():
    with pytest.raises(ResourceLimit):
        trivial_words(F(2), 10, cap=1000)


def test_trivial_words_closed_under_inverse_and_monotone():
    s4 = symmetric_group(4)
    mg = MarkedGroup(s4, s4.gens)
    prev = trivial_words(mg, 0)
    for r in range(1, 7):
        cur = trivial_words(mg, r)
        assert prev.words <= cur.words
        assert all(w.inverse() in cur for w in cur.words)
        prev = cur


def test_valuation_examples():
    assert valuation(Z(), Zm(7), 10).value == 6
    assert valuation(Zm(2), Zm(3), 10).value == 1
    v = valuation(Zm(5), Zm(5), 8)
    assert v.value == 8 and not v.exact
    with pytest.raises(MarkingLengthMismatch):
        valuation(Z(), F(2), 3)


def test_distance_examples():
    assert marked_distance(Z(), Zm(7), 10) == (Fraction(1, 64), Fraction(1, 64))
    assert marked_distance(Zm(5), Zm(5), 10) == (Fraction(0), Fraction(1, 1024))
    assert marked_distance(Zm(2), Zm(3), 10) == (Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("m", range(2, 21))
def test_valuation_z_vs_zm_matches_oracle(m):
    assert valuation(Z(), Zm(m), 30).value == cyclic_valuation(0, m, 30) == m - 1


def test_valuation_is_trivial_word_agreement():
    s3, d3 = symmetric_group(3), dihedral_group(3)
    a, b = MarkedGroup(s3, s3.gens), MarkedGroup(d3, d3.gens)
    v = valuation(a, b, 6)
    for r in range(7):
        same = trivial_words(a, r).words == trivial_words(b, r).words
        assert same == (r <= v.value)


def _family():
    return [Z()] + [Zm(m) for m in range(2, 13)]


def test_ultrametric_on_cyclic_family():
    fam = _family()
    cap = 40
    v = {}
    for i, j in itertools.combinations_with_replacement(range(len(fam)), 2):
        v[i, j] = v[j, i] = valuation(fam[i], fam[j], cap)
    for i, j, k in itertools.product(range(len(fam)), repeat=3):
        if v[i, j].exact and v[j, k].exact and v[i, k].exact:
            assert v[i, k].value >= min(v[i, j].value, v[j, k].value)


def test_identity_embedding_preserves_valuations():
    fam = [Z(), Zm(3), Zm(4), Zm(6)]
    for x, y in itertools.combinations(fam, 2):
        v1 = valuation(x, y, 12)
        v2 = valuation(x.with_identity_appended(), y.with_identity_appended(), 12)
        assert v1 == v2


@pytest.mark.parametrize("m", range(2, 13))
def test_encoding_and_kernel_agreement_radii(m):
    for R in range(6):
        enc_same = ball_encoding(ball(Z(), R)) == ball_encoding(ball(Zm(m), R))
        kern = lambda r: trivial_words(Z(), r).words == trivial_words(Zm(m), r).words
        if enc_same:
            assert kern(R)
            assert kern(2 * R + 1)
        if kern(2 * R + 1):
            assert enc_same


def test_word_norm_examples():
    assert word_norm(Zm(5), 0, 10) == 0
    assert word_norm(Zm(5), 3, 10) == 2
    assert word_norm(F(2), FreeWord.parse("abab"), 10) == 4
    assert word_norm(Z(), 50, 10) is None
    assert norms_of(Zm(5), [0, 1, 3, 4], 10) == {0: 0, 1: 1, 4: 1, 3: 2}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), max_size=6))
def test_free_word_norm_is_reduced_length(letters):
    w = FreeWord(letters)
    assert word_norm(F(2), w, 8) == len(w)
