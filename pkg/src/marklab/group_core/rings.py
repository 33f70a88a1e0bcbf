"""Exact unital rings used as coefficient rings.

Provided instances: the integers, integers mod m, the field with four
elements and k x k matrices over any of these. All of them are noetherian;
that hypothesis is documented here and never tested.
"""

from __future__ import annotations

import itertools
import random
from typing import Hashable, Iterator, Sequence

from ..errors import InvalidParameters

RingElement = Hashable


class Ring:
    """Oracle contract for an exact unital ring.

    Finite rings implement :meth:`elements` (zero first, deterministic order).
    """

    name = "R"
    zero: RingElement = 0
    one: RingElement = 1
    is_finite = False
    is_commutative = True

    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def eq(self, x, y) -> bool:
        return x == y

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero)

    def try_inverse(self, x):
        """Two-sided inverse of ``x`` or None."""
        if self.is_finite:
            for y in self.elements():
                if self.eq(self.mul(x, y), self.one) and self.eq(self.mul(y, x), self.one):
                    return y
            return None
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise NotImplementedError(f"{self.name} is not enumerable")

    def size(self) -> int:
        return sum(1 for _ in self.elements())

    def from_int(self, k: int):
        acc, unit = self.zero, self.one if k >= 0 else self.neg(self.one)
        for _ in range(abs(k)):
            acc = self.add(acc, unit)
        return acc

    def parse(self, text: str):
        return self.from_int(int(text))

    def format(self, x) -> str:
        return str(x)

    def sample(self, rng: random.Random):
        if self.is_finite:
            return rng.choice(list(self.elements()))
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class Integers(Ring):
    name = "Z"

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def try_inverse(self, x):
        return x if x in (1, -1) else None

    def from_int(self, k: int):
        return k

    def sample(self, rng: random.Random):
        return rng.randint(-5, 5)


class IntegersMod(Ring):
    """Z/mZ with residues 0..m-1."""

    is_finite = True

    def __init__(self, m: int):
        if m < 2:
            raise InvalidParameters(f"modulus must be >= 2, got {m}")
        self.m = m
        self.name = f"Z/{m}"

    def add(self, x, y):
        return (x + y) % self.m

    def mul(self, x, y):
        return x * y % self.m

    def neg(self, x):
        return -x % self.m

    def try_inverse(self, x):
        try:
            return pow(x, -1, self.m)
        except ValueError:
            return None

    def elements(self):
        return iter(range(self.m))

    def size(self) -> int:
        return self.m

    def from_int(self, k: int):
        return k % self.m


class GF4(Ring):
    """The field with four elements, F_2[w]/(w^2 + w + 1).

    Element ``a0 + a1*w`` is encoded as the integer ``a0 + 2*a1``.
    """

    name = "F4"
    is_finite = True

    def add(self, x, y):
        return x ^ y

    def mul(self, x, y):
        a0, a1, b0, b1 = x & 1, x >> 1, y & 1, y >> 1
        # w^2 = w + 1
        c0 = (a0 & b0) ^ (a1 & b1)
        c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1)
        return c0 | (c1 << 1)

    def neg(self, x):
        return x

    def elements(self):
        return iter(range(4))

    def size(self) -> int:
        return 4

    def from_int(self, k: int):
        return k & 1

    def frobenius(self, x):
        return self.mul(x, x)

    def format(self, x) -> str:
        return ["0", "1", "w", "w+1"][x]

    def parse(self, text: str):
        table = {"0": 0, "1": 1, "w": 2, "w+1": 3, "1+w": 3}
        return table[text.replace(" ", "")]


Matrix = tuple[tuple[RingElement, ...], ...]


class MatrixRing(Ring):
    """k x k matrices over a commutative base ring; elements are row tuples."""

    def __init__(self, base: Ring, k: int):
        if k < 1:
            raise InvalidParameters("matrix size must be >= 1")
        self.base, self.k = base, k
        self.name = f"Mat{k}({base.name})"
        self.is_finite = base.is_finite
        self.is_commutative = k == 1 and base.is_commutative
        self.zero = self.scalar(base.zero)
        self.one = self.scalar(base.one)

    def scalar(self, c) -> Matrix:
        b = self.base
        return tuple(tuple(c if i == j else b.zero for j in range(self.k)) for i in range(self.k))

    def add(self, x, y):
        b = self.base
        return tuple(tuple(b.add(u, v) for u, v in zip(rx, ry)) for rx, ry in zip(x, y))

    def neg(self, x):
        return tuple(tuple(self.base.neg(u) for u in r) for r in x)

    def mul(self, x, y):
        b = self.base
        cols = list(zip(*y))
        out = []
        for row in x:
            out_row = []
            for col in cols:
                acc = b.zero
                for u, v in zip(row, col):
                    acc = b.add(acc, b.mul(u, v))
                out_row.append(acc)
            out.append(tuple(out_row))
        return tuple(out)

    def det(self, x):
        b = self.base
        acc = b.zero
        for perm in itertools.permutations(range(self.k)):
            term = b.from_int(_perm_sign(perm))
            for i, j in enumerate(perm):
                term = b.mul(term, x[i][j])
            acc = b.add(acc, term)
        return acc

    def adjugate(self, x):
        b, k = self.base, self.k
        if k == 1:
            return ((b.one,),)
        minor_ring = MatrixRing(b, k - 1)
        adj = [[b.zero] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                minor = tuple(tuple(x[r][c] for c in range(k) if c != j) for r in range(k) if r != i)
                d = minor_ring.det(minor)
                adj[j][i] = d if (i + j) % 2 == 0 else b.neg(d)
        return tuple(tuple(r) for r in adj)

    def try_inverse(self, x):
        d_inv = self.base.try_inverse(self.det(x))
        if d_inv is None:
            return None
        adj = self.adjugate(x)
        return tuple(tuple(self.base.mul(d_inv, e) for e in r) for r in adj)

    def elements(self):
        for flat in itertools.product(list(self.base.elements()), repeat=self.k * self.k):
            yield tuple(tuple(flat[i * self.k:(i + 1) * self.k]) for i in range(self.k))

    def from_int(self, k: int):
        return self.scalar(self.base.from_int(k))

    def sample(self, rng: random.Random):
        return tuple(tuple(self.base.sample(rng) for _ in range(self.k)) for _ in range(self.k))

    def from_rows(self, rows: Sequence[Sequence]) -> Matrix:
        return tuple(tuple(r) for r in rows)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def ring_from_name(name: str) -> Ring:
    """Build a ring from ``"Z"``, ``"Z/m"`` (or ``"zmod:m"``), ``"F4"`` or ``"Mat<k>(<base>)"``."""
    text = name.strip()
    if text in ("Z", "integers"):
        return Integers()
    if text.lower() in ("f4", "gf4"):
        return GF4()
    if text.startswith("Z/"):
        return IntegersMod(int(text[2:]))
    if text.startswith("zmod:"):
        return IntegersMod(int(text[5:]))
    if text.startswith("Mat") and text.endswith(")"):
        k, base = text[3:-1].split("(", 1)
        return MatrixRing(ring_from_name(base), int(k))
    raise InvalidParameters(f"unknown ring {name!r}")
