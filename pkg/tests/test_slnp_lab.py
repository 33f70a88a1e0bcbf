import random
import warnings
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marklab.errors import InvalidParameters, MissingNamedGenerators, NotCoprime
from marklab.group_core import FreeWord
from marklab.slnp_lab import (
    Presentation,
    amalgam_presentation,
    amalgamated_generators,
    centralizer_sample,
    f_membership,
    hnn_presentation,
    make_generators,
    order_sweep,
    presentation_deficiency,
    reduce_mod_q,
    test_g_vanishing as g_vanishing,
    verify_order_step,
    x_not_in_F_witness,
)

from oracles import frac_matmul, laurent_to_frac, mod_identity, mod_matmul, mod_order

PRIMES_30 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def frac_reduce(m, q):
    """Fraction matrix -> residues mod q, denominators inverted mod q."""
    return [[v.numerator * pow(v.denominator, -1, q) % q for v in row] for row in m]


def cyclic_powers(m, q):
    seen = []
    cur = mod_identity(len(m))
    while True:
        cur = mod_matmul(cur, m, q)
        seen.append(tuple(map(tuple, cur)))
        if cur == mod_identity(len(m)):
            return set(seen)


def test_make_generators_examples():
    g = make_generators(3, 3)
    x = laurent_to_frac(g.x)
    assert x[0][1] == Fraction(2, 3)
    cube = frac_matmul(frac_matmul(x, x), x)
    assert cube == laurent_to_frac(g.a)
    assert laurent_to_frac(g.a)[0][1] == 2 and laurent_to_frac(g.b)[1][0] == 2
    g5 = make_generators(3, 5)
    assert g5.x**5 == g5.a
    with pytest.warns(UserWarning):
        small = make_generators(2, 3)
    assert small.small_rank
    for bad in ((3, 2), (3, 9), (1, 3)):
        with pytest.raises(InvalidParameters):
            make_generators(*bad)


@pytest.mark.parametrize("n,p", [(3, 3), (3, 5), (4, 3), (4, 7), (5, 11)])
def test_x_power_p_is_a(n, p):
    g = make_generators(n, p)
    x = laurent_to_frac(g.x)
    acc = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(p):
        acc = frac_matmul(acc, x)
    assert acc == laurent_to_frac(g.a)


def test_reduce_examples():
    g = make_generators(3, 3)
    assert reduce_mod_q(g.x, 5).entries == ((1, 4, 0), (0, 1, 0), (0, 0, 1))
    assert reduce_mod_q(g.a, 2).entries == tuple(map(tuple, mod_identity(3)))
    with pytest.raises(NotCoprime):
        reduce_mod_q(g.x, 3)
    with pytest.raises(NotCoprime):
        verify_order_step(3, 3, 6)


def test_reduce_is_multiplicative_on_1000_products():
    rng = random.Random(7)
    for p in (3, 5):
        g = make_generators(3, p)
        pool = [g.a, g.b, g.x, g.a.inverse(), g.b.inverse(), g.x.inverse()]
        for _ in range(500):
            m, n = rng.choice(pool), rng.choice(pool)
            for _ in range(rng.randrange(3)):
                m = m @ rng.choice(pool)
            q = rng.choice([q for q in range(2, 40) if gcd(q, p) == 1])
            assert reduce_mod_q(m @ n, q) == reduce_mod_q(m, q) @ reduce_mod_q(n, q)
            prod = frac_matmul(laurent_to_frac(m), laurent_to_frac(n))
            assert [list(r) for r in reduce_mod_q(m @ n, q).entries] == frac_reduce(prod, q)


def test_order_examples():
    rep = verify_order_step(3, 3, 5)
    assert (rep.o_a, rep.o_x, rep.subgroup_equal, rep.gcd_ox_p) == (5, 5, True, 1)
    rep = verify_order_step(3, 3, 2)
    assert (rep.o_a, rep.o_x) == (1, 1)
    rep = verify_order_step(3, 3, 4)
    assert (rep.o_a, rep.o_x) == (2, 2)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("p", [3, 5])
def test_order_sweep_against_oracle(n, p):
    qs = [q for q in range(2, 51) if gcd(q, p) == 1]
    reports = order_sweep(n, p, range(2, 51))
    assert [r.q for r in reports] == qs
    g = make_generators(n, p)
    for rep in reports:
        q = rep.q
        a = frac_reduce(laurent_to_frac(g.a), q)
        x = frac_reduce(laurent_to_frac(g.x), q)
        assert rep.o_a == mod_order(a, q) and rep.o_x == mod_order(x, q)
        assert rep.subgroup_equal == (cyclic_powers(a, q) == cyclic_powers(x, q))
        assert rep.holds and rep.gcd_ox_p == 1


def test_centralizer_examples():
    assert centralizer_sample(3, 5, [], 0) == []
    ident = centralizer_sample(3, 5, [reduce_mod_q(make_generators(3, 3).a, 5) ** 0], 5)
    assert ident[0] == tuple(map(tuple, mod_identity(3)))
    with pytest.raises(InvalidParameters):
        centralizer_sample(3, 4, [], 3)


@pytest.mark.parametrize("q", [5, 7, 11])
def test_centralizer_samples_commute(q):
    g = make_generators(3, 3)
    gens = [reduce_mod_q(w, q) for w in amalgamated_generators(g, 2)]
    sample = centralizer_sample(3, q, gens, 40)
    assert len(sample) > 1
    for c in sample:
        c = [list(r) for r in c]
        for w in gens:
            w = [list(r) for r in w.entries]
            assert mod_matmul(c, w, q) == mod_matmul(w, c, q)


def test_vanishing_examples():
    rep = g_vanishing(3, 3, 5, 10)
    assert rep.twists == 10 and rep.holds
    assert g_vanishing(3, 3, 5, 1).twists == 1  # identity twist only
    with pytest.raises(NotCoprime):
        g_vanishing(3, 3, 3, 5)


@pytest.mark.parametrize("p", [3, 5])
def test_vanishing_for_prime_q_up_to_30(p):
    for q in PRIMES_30:
        if q == p:
            continue
        rep = g_vanishing(3, p, q, 10, seed=q)
        assert rep.amalgam_agreement and rep.counterexamples == [], q


def test_presentation_examples():
    free = Presentation(("a", "b"), ())
    assert presentation_deficiency(free) == 2
    am = amalgam_presentation(free, 2)
    assert (len(am.generators), len(am.relators)) == (4, 2)
    assert am.format_relator(am.relators[0]) == "a abar'"
    hnn = hnn_presentation(free, 2)
    assert (len(hnn.generators), len(hnn.relators)) == (3, 2)
    assert hnn.format_relator(hnn.relators[0]) == "t a t' a'"
    with pytest.raises(MissingNamedGenerators):
        amalgam_presentation(Presentation(("u", "v"), ()), 2)


def _sized(nx, nr, seed=0):
    rng = random.Random(seed)
    names = ("a", "b") + tuple(f"g{i}" for i in range(nx - 2))
    rels = []
    for _ in range(nr):
        w = FreeWord([(rng.randrange(nx), rng.choice((1, -1))) for _ in range(rng.randint(1, 6))])
        rels.append(w if len(w) else FreeWord.generator(0))
    return Presentation(names, tuple(rels))


def test_presentation_counts():
    p = _sized(3, 5)
    am, hnn = amalgam_presentation(p, 2), hnn_presentation(p, 2)
    assert (len(am.generators), len(am.relators)) == (6, 12)
    assert (len(hnn.generators), len(hnn.relators)) == (4, 7)
    assert presentation_deficiency(am) == -6
    assert presentation_deficiency(hnn) == -3


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 8), st.integers(0, 10**6))
def test_deficiency_identities(nx, nr, seed):
    p = _sized(nx, nr, seed)
    d = presentation_deficiency(p)
    defs = []
    for r in range(2, 7):
        am = amalgam_presentation(p, r)
        assert presentation_deficiency(am) == 2 * d - r
        assert presentation_deficiency(hnn_presentation(p, r)) == d + 1 - r
        defs.append(presentation_deficiency(am))
    assert len(set(defs)) == len(defs)


def test_presentation_text_round_trip(tmp_path):
    p = _sized(3, 4, 1)
    path = tmp_path / "p.txt"
    path.write_text(p.to_text())
    again = Presentation.from_text(path.read_text())
    assert again == p
    am = amalgam_presentation(again, 3)
    assert Presentation.from_text(am.to_text()) == am


def test_non_membership_witness():
    assert x_not_in_F_witness(3, 3).reason == "entry (1,2) = 2/3 non-integral"
    assert x_not_in_F_witness(3, 5).reason == "entry (1,2) = 2/5 non-integral"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert x_not_in_F_witness(2, 3).entry == (1, 2)
    g = make_generators(3, 3)
    assert f_membership(g.a) == FreeWord.parse("a")
    assert f_membership(g.b @ g.a.inverse()) == FreeWord.parse("ba'")
    assert f_membership(g.x) is None
