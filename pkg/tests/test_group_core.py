import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marklab.errors import IndexOutOfRange, InvalidDeterminant, InvalidParameters, NotCoprime
from marklab.group_core import (
    GF4,
    SANOV_A,
    SANOV_B,
    CyclicGroup,
    FreeGroup,
    FreeWord,
    Integers,
    IntegerGroup,
    IntegerMatrixGroup,
    IntegersMod,
    LaurentMatrix,
    LaurentMatrixGroup,
    MatrixRing,
    ModularMatrix,
    ModularMatrixGroup,
    count_reduced_words,
    dihedral_group,
    dump_matrices,
    element_order,
    evaluate_word,
    group_from_name,
    is_normal,
    klein_group,
    load_matrices,
    reduced_words,
    ring_from_name,
    sanov_membership,
    symmetric_group,
)
from marklab.group_core.matrices import elementary_rows, int_det

from oracles import (
    all_reduced_words,
    brute_count_reduced,
    elementary,
    frac_inverse,
    frac_matmul,
    laurent_to_frac,
    mod_matmul,
    mod_order,
    perm_closure,
)

# -- free words -------------------------------------------------------------------

letter = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
raw_words = st.lists(letter, max_size=12)


@given(raw_words)
def test_freeword_is_reduced(letters):
    w = FreeWord(letters)
    for x, y in zip(w.letters, w.letters[1:]):
        assert x != (y[0], -y[1])


@given(raw_words, raw_words, raw_words)
def test_freeword_group_laws(a, b, c):
    x, y, z = FreeWord(a), FreeWord(b), FreeWord(c)
    assert (x * y) * z == x * (y * z)
    assert x * x.inverse() == FreeWord()
    assert FreeWord() * x == x


@given(raw_words, st.integers(-3, 3))
def test_freeword_power_matches_repeated_product(a, k):
    x = FreeWord(a)
    expected = FreeWord()
    for _ in range(abs(k)):
        expected = expected * (x if k > 0 else x.inverse())
    assert x**k == expected


def test_parse_and_format():
    assert FreeWord.parse("a a' b") == FreeWord.parse("b")
    assert FreeWord.parse("ab^-2") == FreeWord([(0, 1), (1, -1), (1, -1)])
    assert FreeWord.parse("1") == FreeWord()
    w = FreeWord.parse("ab'a")
    assert FreeWord.parse(w.format()) == w
    assert w.format(sep=" ") == "a b' a"


def test_reduced_word_count_matches_oracle():
    for n in (1, 2, 3):
        for length in range(5):
            assert count_reduced_words(n, length) == brute_count_reduced(n, length)
    # closed form 2n(2n-1)^(k-1) summed; oracle above agrees on small cases
    assert count_reduced_words(2, 8) == len(all_reduced_words(2, 8)) == 13121


def test_reduced_words_shortlex_and_complete():
    words = [w for k in range(4) for w in reduced_words(2, k)]
    assert {tuple(w.letters) for w in words} == set(all_reduced_words(2, 3))
    keys = [w.sort_key() for w in words]
    assert keys == sorted(keys)


# -- groups ---------------------------------------------------------------------------


def _finite_groups():
    return [
        CyclicGroup(1),
        CyclicGroup(7),
        symmetric_group(3),
        symmetric_group(4),
        dihedral_group(5),
        klein_group(),
        group_from_name("C2xS3"),
        ModularMatrixGroup(2, 5),
    ]


def _sampler(group, rng):
    if isinstance(group, ModularMatrixGroup):
        gens = [ModularMatrix.from_rows(SANOV_A, group.q), ModularMatrix.from_rows(SANOV_B, group.q)]
        return lambda: evaluate_word(group, gens, FreeWord([(rng.randrange(2), rng.choice((1, -1))) for _ in range(6)]))
    if isinstance(group, IntegerGroup):
        return lambda: rng.randint(-50, 50)
    if isinstance(group, FreeGroup):
        return lambda: FreeWord([(rng.randrange(group.rank), rng.choice((1, -1))) for _ in range(rng.randrange(8))])
    if isinstance(group, IntegerMatrixGroup):
        return lambda: evaluate_word(group, (SANOV_A, SANOV_B), FreeWord([(rng.randrange(2), rng.choice((1, -1))) for _ in range(5)]))
    if isinstance(group, LaurentMatrixGroup):
        gens = [LaurentMatrix.from_integers(elementary_rows(3, 0, 1, 2), 3), LaurentMatrix.from_integers(elementary_rows(3, 1, 0, 2), 3)]
        x = LaurentMatrix(3, 3, (((1, 0), (2, 1), (0, 0)), ((0, 0), (1, 0), (0, 0)), ((0, 0), (0, 0), (1, 0))))
        gens.append(x)
        return lambda: evaluate_word(group, gens, FreeWord([(rng.randrange(3), rng.choice((1, -1))) for _ in range(4)]))
    elems = group.elements()
    return lambda: rng.choice(elems)


ALL_GROUPS = _finite_groups() + [IntegerGroup(), FreeGroup(2), IntegerMatrixGroup(2), LaurentMatrixGroup(3, 3)]


@pytest.mark.parametrize("group", ALL_GROUPS, ids=lambda g: g.name)
def test_group_laws_on_1000_triples(group):
    rng = random.Random(2024)
    draw = _sampler(group, rng)
    triples = 1000 if not isinstance(group, LaurentMatrixGroup) else 200
    e = group.identity
    for _ in range(triples):
        g, h, k = draw(), draw(), draw()
        assert group.mul(group.mul(g, h), k) == group.mul(g, group.mul(h, k))
        assert group.mul(g, group.inv(g)) == e
        assert group.mul(e, g) == g
        assert hash(g) == group.hash(g)


@pytest.mark.parametrize("group", _finite_groups(), ids=lambda g: g.name)
def test_finite_groups_enumerate_identity_first_and_closed(group):
    elems = group.elements()
    assert elems[0] == group.identity
    s = set(elems)
    assert len(s) == len(elems)
    for g in elems[:20]:
        for h in elems[:20]:
            assert group.mul(g, h) in s


def test_permutation_group_orders_against_closure_oracle():
    for n, order in ((3, 6), (4, 24)):
        g = symmetric_group(n)
        assert g.order() == order == len(perm_closure(list(g.gens)))
    assert dihedral_group(5).order() == 10
    assert len(group_from_name("C2xS3").elements()) == 12
    # |SL_2(Z/q)| = q^3 prod (1 - 1/l^2) over primes l | q
    assert len(ModularMatrixGroup(2, 5).elements()) == 120
    assert len(ModularMatrixGroup(2, 4).elements()) == 48


def test_is_normal():
    s3 = symmetric_group(3)
    a3 = [g for g in s3.elements() if len(perm_closure([g])) in (1, 3)]
    assert is_normal(s3, a3)
    transposition = s3.gens[0]
    assert not is_normal(s3, [s3.identity, transposition])


def test_evaluate_word_examples():
    g = ModularMatrixGroup(2, 5)
    gens = (ModularMatrix.from_rows(SANOV_A, 5), ModularMatrix.from_rows(SANOV_B, 5))
    assert evaluate_word(g, gens, FreeWord()) == g.identity
    expected = mod_matmul([list(r) for r in SANOV_A], [list(r) for r in SANOV_B], 5)
    got = evaluate_word(g, gens, FreeWord.parse("ab"))
    assert [list(r) for r in got.entries] == expected
    f2 = FreeGroup(2)
    assert evaluate_word(f2, f2.generators(), FreeWord([(0, 1), (0, -1), (1, 1)])) == FreeWord.parse("b")
    with pytest.raises(IndexOutOfRange):
        evaluate_word(f2, f2.generators()[:1], FreeWord.parse("b"))


def test_element_order_examples():
    g5 = ModularMatrixGroup(3, 5)
    m = ModularMatrix.from_rows(elementary_rows(3, 0, 1, 2), 5)
    assert element_order(g5, g5.identity, 10) == 1
    assert element_order(g5, m, 100) == 5 == mod_order(elementary(3, 0, 1, 2), 5)
    g2 = ModularMatrixGroup(3, 2)
    assert element_order(g2, ModularMatrix.from_rows(elementary_rows(3, 0, 1, 2), 2), 10) == 1
    assert element_order(IntegerGroup(), 1, 50) is None


# -- rings --------------------------------------------------------------------------------


RINGS = [Integers(), IntegersMod(6), IntegersMod(7), GF4(), MatrixRing(IntegersMod(2), 2), MatrixRing(Integers(), 2)]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.name)
def test_ring_laws(ring):
    rng = random.Random(7)
    for _ in range(500):
        x, y, z = ring.sample(rng), ring.sample(rng), ring.sample(rng)
        assert ring.mul(ring.mul(x, y), z) == ring.mul(x, ring.mul(y, z))
        assert ring.mul(x, ring.add(y, z)) == ring.add(ring.mul(x, y), ring.mul(x, z))
        assert ring.mul(ring.add(x, y), z) == ring.add(ring.mul(x, z), ring.mul(y, z))
        assert ring.mul(ring.one, x) == x == ring.mul(x, ring.one)
        assert ring.add(x, ring.neg(x)) == ring.zero
        inv = ring.try_inverse(x)
        if inv is not None:
            assert ring.mul(x, inv) == ring.one == ring.mul(inv, x)


def test_gf4_is_a_field_with_frobenius():
    f = GF4()
    for x in f.elements():
        if x != f.zero:
            assert f.try_inverse(x) is not None
        for y in f.elements():
            assert f.frobenius(f.mul(x, y)) == f.mul(f.frobenius(x), f.frobenius(y))
            assert f.frobenius(f.add(x, y)) == f.add(f.frobenius(x), f.frobenius(y))
    assert len(list(f.elements())) == 4


def test_ring_from_name():
    assert ring_from_name("Z/5").size() == 5
    assert ring_from_name("Mat2(Z/2)").size() == 16
    with pytest.raises(InvalidParameters):
        ring_from_name("Q")


def test_unit_counts_against_brute_force():
    r = MatrixRing(IntegersMod(2), 2)
    units = [x for x in r.elements() if r.try_inverse(x) is not None]
    assert len(units) == 6  # |GL_2(F_2)|
    assert [x for x in IntegersMod(8).elements() if IntegersMod(8).try_inverse(x) is not None] == [1, 3, 5, 7]


# -- matrices --------------------------------------------------------------------------------


def test_modular_matrix_checks_determinant():
    with pytest.raises(InvalidDeterminant):
        ModularMatrix.from_rows(((2, 0), (0, 2)), 5)
    m = ModularMatrix.from_rows(((2, 0), (0, 3)), 5)
    assert (m @ m.inverse()).is_identity()


def _gamma(p):
    a = LaurentMatrix.from_integers(elementary_rows(3, 0, 1, 2), p)
    b = LaurentMatrix.from_integers(elementary_rows(3, 1, 0, 2), p)
    x = LaurentMatrix(3, p, (((1, 0), (2, 1), (0, 0)), ((0, 0), (1, 0), (0, 0)), ((0, 0), (0, 0), (1, 0))))
    return [a, b, x, a.inverse(), b.inverse(), x.inverse()]


@pytest.mark.parametrize("p", [3, 5])
def test_laurent_arithmetic_agrees_with_fractions_on_500_products(p):
    rng = random.Random(p)
    gens = _gamma(p)
    for _ in range(500):
        k = rng.randrange(1, 7)
        factors = [rng.choice(gens) for _ in range(k)]
        m = factors[0]
        f = laurent_to_frac(factors[0])
        for g in factors[1:]:
            m = m @ g
            f = frac_matmul(f, laurent_to_frac(g))
        assert laurent_to_frac(m) == f
        assert laurent_to_frac(m.inverse()) == frac_inverse(f)
        for row in m.entries:
            for num, exp in row:
                assert exp == 0 or num % p != 0


def test_laurent_rejects_bad_input():
    with pytest.raises(InvalidParameters):
        LaurentMatrix.from_integers(elementary_rows(2, 0, 1, 1), 4)
    with pytest.raises(InvalidDeterminant):
        LaurentMatrix.from_integers(((2, 0), (0, 1)), 3)
    x = _gamma(3)[2]
    with pytest.raises(NotCoprime):
        x.reduce_mod(9)


def test_laurent_reduction_uses_modular_inverse():
    x = _gamma(3)[2]
    assert x.reduce_mod(5).entries[0][1] == 4  # 2 * 3^-1 = 2 * 2 mod 5
    assert laurent_to_frac(x)[0][1] == Fraction(2, 3)


def test_matrix_text_round_trip():
    mats = [ModularMatrix.from_rows(SANOV_A, 7)] + _gamma(5)[:3]
    text = dump_matrices(mats)
    assert "inv 5" in text and "2/5" in text
    assert load_matrices(text) == mats


# -- Sanov membership ---------------------------------------------------------------------------


def _mat(word):
    m = ((1, 0), (0, 1))
    inv = {(0, 1): SANOV_A, (0, -1): ((1, -2), (0, 1)), (1, 1): SANOV_B, (1, -1): ((1, 0), (-2, 1))}
    for l in word:
        g = inv[l]
        m = tuple(tuple(sum(m[i][k] * g[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return m


def test_sanov_round_trip_all_words_up_to_8():
    words = all_reduced_words(2, 8)
    assert len(words) == 13121
    for w in words:
        assert sanov_membership(_mat(w)) == FreeWord(w)


def test_sanov_examples():
    assert sanov_membership(((1, 0), (0, 1))) == FreeWord()
    assert sanov_membership(((5, 2), (2, 1))) == FreeWord.parse("ab")
    assert sanov_membership(((1, 1), (0, 1))) is None
    with pytest.raises(InvalidDeterminant):
        sanov_membership(((2, 0), (0, 1)))


@settings(max_examples=200)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_sanov_rejects_matrices_not_congruent_to_identity_mod_2(x, y, z):
    # [[1+2x, y], [z, w]] with det 1 and y odd cannot lie in the level-2 congruence subgroup
    a, b = 1 + 2 * x, 2 * y + 1
    # pick c, d with a d - b c = 1 when possible
    from math import gcd

    if gcd(a, b) != 1:
        return
    d = pow(a, -1, abs(b)) if abs(b) > 1 else 0
    c = (a * d - 1) // b
    m = ((a, b), (c, d))
    assert int_det(m) == 1
    assert sanov_membership(m) is None
