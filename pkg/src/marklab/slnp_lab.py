"""SL_n(Z[1/p]) at desk scale: the generators a, b, x, their congruence images,
the order comparison o_a = o_x, centralizer-twisted commutators and
presentation combinators for amalgams and HNN extensions.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import asdict, dataclass, field
from math import gcd
from typing import Sequence

from .errors import InvalidParameters, MissingNamedGenerators, NotCoprime, ResourceLimit
from .group_core.groups import ModularMatrixGroup, element_order
from .group_core.matrices import LaurentMatrix, ModularMatrix, elementary_rows, identity_rows, int_det
from .group_core.sanov import sanov_membership
from .group_core.words import FreeWord


@dataclass(frozen=True)
class GammaGenerators:
    """a = I + 2E12, b = I + 2E21 and x = I + (2/p)E12 in SL_n(Z[1/p])."""

    n: int
    p: int
    a: LaurentMatrix
    b: LaurentMatrix
    x: LaurentMatrix
    small_rank: bool = False


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def make_generators(n: int, p: int) -> GammaGenerators:
    if n < 2:
        raise InvalidParameters(f"n must be >= 2, got {n}")
    if p <= 2 or not _is_prime(p):
        raise InvalidParameters(f"p must be an odd prime, got {p}")
    small = n == 2
    if small:
        warnings.warn("n = 2 gives only the Sanov-sized block; the amalgam argument needs n >= 3", stacklevel=2)
    a = LaurentMatrix.from_integers(elementary_rows(n, 0, 1, 2), p)
    b = LaurentMatrix.from_integers(elementary_rows(n, 1, 0, 2), p)
    entries = [[(v, 0) for v in row] for row in identity_rows(n)]
    entries[0][1] = (2, 1)
    x = LaurentMatrix(n, p, tuple(tuple(r) for r in entries))
    if x**p != a:
        raise AssertionError("x^p != a")
    return GammaGenerators(n, p, a, b, x, small)


def reduce_mod_q(m: LaurentMatrix, q: int) -> ModularMatrix:
    """Entry-wise image in SL_n(Z/qZ); requires gcd(q, p) = 1."""
    return m.reduce_mod(q)


def _cyclic_subgroup(g: ModularMatrix, bound: int) -> set:
    powers, h = {ModularMatrix.identity(g.n, g.q)}, g
    for _ in range(bound):
        if h in powers:
            return powers
        powers.add(h)
        h = h @ g
    raise ResourceLimit(f"order exceeds {bound}")


@dataclass
class OrderReport:
    n: int
    p: int
    q: int
    o_a: int
    o_x: int
    subgroup_equal: bool
    gcd_ox_p: int

    @property
    def holds(self) -> bool:
        return self.o_a == self.o_x and self.subgroup_equal and self.gcd_ox_p == 1

    def to_dict(self) -> dict:
        return asdict(self)


def verify_order_step(n: int, p: int, q: int, bound: int = 10**5) -> OrderReport:
    """Orders of the images of a and x mod q and whether they generate the same cyclic group."""
    if gcd(q, p) != 1:
        raise NotCoprime(f"gcd({q}, {p}) != 1")
    gens = make_generators(n, p)
    ra, rx = reduce_mod_q(gens.a, q), reduce_mod_q(gens.x, q)
    group = ModularMatrixGroup(n, q)
    o_a, o_x = element_order(group, ra, bound), element_order(group, rx, bound)
    if o_a is None or o_x is None:
        raise ResourceLimit(f"order exceeds {bound}")
    same = _cyclic_subgroup(ra, bound) == _cyclic_subgroup(rx, bound)
    return OrderReport(n, p, q, o_a, o_x, same, gcd(o_x, p))


def order_sweep(n: int, p: int, q_values: Sequence[int]) -> list[OrderReport]:
    return [verify_order_step(n, p, q) for q in q_values if gcd(q, p) == 1]


# -- centralizers over Z/q, q prime --------------------------------------------


def _nullspace_mod(rows: list[list[int]], ncols: int, q: int) -> list[list[int]]:
    """Basis of {v : A v = 0} over GF(q) by Gauss-Jordan elimination."""
    a = [[e % q for e in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], -1, q)
        a[rank] = [e * inv % q for e in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(e - f * pr) % q for e, pr in zip(a[i], a[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc] % q
        basis.append(v)
    return basis


def commuting_basis(n: int, q: int, generators: Sequence[ModularMatrix]) -> list[tuple]:
    """Basis of the algebra {C : CM = MC for every generator M} over GF(q)."""
    rows = []
    for m in generators:
        e = m.entries
        # (CM - MC)_{ij} = sum_k C_ik M_kj - M_ik C_kj, unknown C_uv at index u*n+v
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for k in range(n):
                    row[i * n + k] += e[k][j]
                    row[k * n + j] -= e[i][k]
                rows.append(row)
    if not rows:
        rows = [[0] * (n * n)]
    basis = _nullspace_mod(rows, n * n, q)
    return [tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n)) for v in basis]


def centralizer_sample(
    n: int, q: int, generators: Sequence[ModularMatrix], count: int, seed: int = 0, enumerate_cap: int = 10**5
) -> list[tuple]:
    """Invertible matrices over GF(q) commuting with every generator.

    The identity comes first. Small commuting algebras are enumerated in
    coefficient order; larger ones are sampled with a seeded generator.
    Elements are returned as row tuples (they lie in GL_n, not necessarily SL_n).
    """
    if not _is_prime(q):
        raise InvalidParameters(f"q must be prime, got {q}")
    if n > 4:
        raise InvalidParameters("centralizers are computed for n <= 4")
    if count <= 0:
        return []
    basis = commuting_basis(n, q, generators)
    ident = identity_rows(n)
    out = [ident]
    seen = {ident}

    def combine(coeffs):
        return tuple(
            tuple(sum(c * bm[i][j] for c, bm in zip(coeffs, basis)) % q for j in range(n)) for i in range(n)
        )

    def accept(mat):
        if mat not in seen and int_det(mat) % q:
            seen.add(mat)
            out.append(mat)

    total = q ** len(basis)
    if total <= enumerate_cap:
        for coeffs in itertools.product(range(q), repeat=len(basis)):
            if len(out) >= count:
                break
            accept(combine(coeffs))
    else:
        rng = random.Random(seed)
        attempts = 0
        while len(out) < count and attempts < 100 * count:
            attempts += 1
            accept(combine([rng.randrange(q) for _ in basis]))
    return out[:count]


def _mat_mul(x, y, q):
    n = len(x)
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) % q for j in range(n)) for i in range(n))


def _gl_inverse(c, q):
    from .group_core.matrices import int_adjugate

    d = int_det(c) % q
    dinv = pow(d, -1, q)
    return tuple(tuple(e * dinv % q for e in row) for row in int_adjugate(c))


@dataclass
class VanishingReport:
    n: int
    p: int
    q: int
    r: int
    twists: int
    amalgam_agreement: bool
    counterexamples: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.amalgam_agreement and not self.counterexamples

    def to_dict(self) -> dict:
        return asdict(self)


def amalgamated_generators(gens: GammaGenerators, r: int) -> list[LaurentMatrix]:
    """b^i a b^-i for i = 0..r-1."""
    binv = gens.b.inverse()
    out = []
    for i in range(r):
        out.append((gens.b**i) @ gens.a @ (binv**i))
    return out


def test_g_vanishing(n: int, p: int, q: int, samples: int, r: int = 2, seed: int = 0) -> VanishingReport:
    """Check [phi(x), phibar(x)] = 1 for phi = pi_q and phibar = conj_c o pi_q.

    c ranges over invertible matrices centralizing the images of the
    amalgamated generators, so phi and phibar agree on F_r.
    """
    if gcd(q, p) != 1:
        raise NotCoprime(f"gcd({q}, {p}) != 1")
    gens = make_generators(n, p)
    amalgam = [reduce_mod_q(w, q) for w in amalgamated_generators(gens, r)]
    twists = centralizer_sample(n, q, amalgam, samples, seed=seed)
    px = reduce_mod_q(gens.x, q).entries
    px_inv = reduce_mod_q(gens.x.inverse(), q).entries
    agree = True
    bad = []
    for c in twists:
        cinv = _gl_inverse(c, q)
        for w in amalgam:
            if _mat_mul(_mat_mul(c, w.entries, q), cinv, q) != w.entries:
                agree = False
        xbar = _mat_mul(_mat_mul(c, px, q), cinv, q)
        xbar_inv = _mat_mul(_mat_mul(c, px_inv, q), cinv, q)
        comm = _mat_mul(_mat_mul(_mat_mul(px, xbar, q), px_inv, q), xbar_inv, q)
        if comm != identity_rows(n):
            bad.append({"c": [list(row) for row in c], "commutator": [list(row) for row in comm]})
    return VanishingReport(n, p, q, r, len(twists), agree, bad)


# kept out of pytest collection: the name starts with "test_"
test_g_vanishing.__test__ = False


# -- presentations ------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Generator names and relator words (FreeWords over generator indices)."""

    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(FreeWord(w.letters) for w in self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise InvalidParameters("generator names must be unique")
        for w in self.relators:
            if w.max_generator() >= len(self.generators):
                raise InvalidParameters(f"relator {w!r} uses an undeclared generator")

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def format_relator(self, w: FreeWord) -> str:
        return w.format(self.generators, sep=" ")

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines.extend(self.format_relator(w) for w in self.relators)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Presentation:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if not lines or not lines[0].startswith("gens:"):
            raise InvalidParameters("first line must be 'gens: ...'")
        gens = tuple(lines[0][5:].split())
        return cls(gens, tuple(FreeWord.parse(ln, gens) for ln in lines[1:]))


def presentation_deficiency(pres: Presentation) -> int:
    return len(pres.generators) - len(pres.relators)


def _conjugates(pres: Presentation, r: int, a: str, b: str, offset: int = 0) -> list[FreeWord]:
    try:
        ia, ib = pres.index(a) + offset, pres.index(b) + offset
    except ValueError:
        raise MissingNamedGenerators(f"presentation lacks generators {a!r} and {b!r}") from None
    A, B = FreeWord.generator(ia), FreeWord.generator(ib)
    return [(B**i) * A * (B ** (-i)) for i in range(r)]


def amalgam_presentation(pres: Presentation, r: int, a: str = "a", b: str = "b", suffix: str = "bar") -> Presentation:
    """Two copies of the presentation glued along b^i a b^-i, i < r."""
    if r < 1:
        raise InvalidParameters("r must be >= 1")
    k = len(pres.generators)
    gens = pres.generators + tuple(g + suffix for g in pres.generators)
    if len(set(gens)) != len(gens):
        raise InvalidParameters(f"suffix {suffix!r} collides with existing generator names")
    shifted = tuple(w.relabel(range(k, 2 * k)) for w in pres.relators)
    left = _conjugates(pres, r, a, b)
    right = _conjugates(pres, r, a, b, offset=k)
    glue = tuple(u * v.inverse() for u, v in zip(left, right))
    return Presentation(gens, pres.relators + shifted + glue)


def hnn_presentation(pres: Presentation, r: int, a: str = "a", b: str = "b", stable: str = "t") -> Presentation:
    """Add a stable letter t commuting with b^i a b^-i, i < r."""
    if r < 1:
        raise InvalidParameters("r must be >= 1")
    if stable in pres.generators:
        raise InvalidParameters(f"stable letter {stable!r} already used")
    k = len(pres.generators)
    gens = pres.generators + (stable,)
    t = FreeWord.generator(k)
    new = tuple(t * w * t.inverse() * w.inverse() for w in _conjugates(pres, r, a, b))
    return Presentation(gens, pres.relators + new)


# -- x is not in F = <a, b> ------------------------------------------------------------


@dataclass(frozen=True)
class NonMembershipWitness:
    entry: tuple[int, int]
    value: str
    reason: str


def x_not_in_F_witness(n: int, p: int) -> NonMembershipWitness:
    """A non-integral entry of x; every element of <a, b> lies in SL_n(Z)."""
    gens = make_generators(n, p) if n > 2 else _quiet_generators(n, p)
    for i, row in enumerate(gens.x.entries):
        for j, (num, exp) in enumerate(row):
            if exp > 0:
                value = f"{num}/{p}" if exp == 1 else f"{num}/{p}^{exp}"
                return NonMembershipWitness((i + 1, j + 1), value, f"entry ({i + 1},{j + 1}) = {value} non-integral")
    raise AssertionError("x is integral")


def _quiet_generators(n: int, p: int) -> GammaGenerators:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return make_generators(n, p)


def f_membership(m: LaurentMatrix) -> FreeWord | None:
    """Word in a, b for m if m lies in <a, b>; None otherwise.

    Non-integral matrices and matrices outside the upper-left 2x2 block are
    rejected directly; the block is decided by Sanov reduction.
    """
    if not m.is_integral():
        return None
    rows = m.integer_rows()
    n = len(rows)
    for i in range(n):
        for j in range(n):
            if (i >= 2 or j >= 2) and rows[i][j] != int(i == j):
                return None
    return sanov_membership((rows[0][:2], rows[1][:2]))
