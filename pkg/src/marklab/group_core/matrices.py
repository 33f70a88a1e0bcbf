"""Exact matrices: residues mod q and matrices over Z[1/p].

Both types are immutable and hashable; equality is entry-wise because
entries are kept in canonical form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from ..errors import InvalidDeterminant, InvalidParameters, NotCoprime

IntMatrix = tuple[tuple[int, ...], ...]


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def int_adjugate(rows: Sequence[Sequence[int]]) -> IntMatrix:
    n = len(rows)
    if n == 1:
        return ((1,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return tuple(tuple(r) for r in adj)


def int_matmul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in x)


def identity_rows(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def elementary_rows(n: int, i: int, j: int, value: int) -> IntMatrix:
    """Rows of I + value * E_ij (0-based indices)."""
    rows = [list(r) for r in identity_rows(n)]
    rows[i][j] += value
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class ModularMatrix:
    """An element of SL_n(Z/qZ); entries are residues in [0, q)."""

    n: int
    q: int
    entries: IntMatrix

    def __post_init__(self):
        if self.q < 2:
            raise InvalidParameters(f"modulus must be >= 2, got {self.q}")
        rows = tuple(tuple(int(e) % self.q for e in row) for row in self.entries)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise InvalidParameters(f"expected a {self.n}x{self.n} matrix")
        object.__setattr__(self, "entries", rows)
        if int_det(rows) % self.q != 1 % self.q:
            raise InvalidDeterminant(f"det = {int_det(rows) % self.q} (mod {self.q}), expected 1")

    @classmethod
    def identity(cls, n: int, q: int) -> ModularMatrix:
        return cls(n, q, identity_rows(n))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int) -> ModularMatrix:
        return cls(len(rows), q, tuple(tuple(r) for r in rows))

    def __matmul__(self, other: ModularMatrix) -> ModularMatrix:
        if (self.n, self.q) != (other.n, other.q):
            raise InvalidParameters("dimension or modulus mismatch")
        prod = int_matmul(self.entries, other.entries)
        return _trusted_modular(self.n, self.q, prod)

    def inverse(self) -> ModularMatrix:
        # det = 1, so the adjugate is the inverse
        return _trusted_modular(self.n, self.q, int_adjugate(self.entries))

    def __pow__(self, k: int) -> ModularMatrix:
        base = self if k >= 0 else self.inverse()
        result = ModularMatrix.identity(self.n, self.q)
        for _ in range(abs(k)):
            result = result @ base
        return result

    def is_identity(self) -> bool:
        return self.entries == identity_rows(self.n)

    def reduce(self, q: int) -> ModularMatrix:
        """Reduce to a modulus dividing the current one."""
        if self.q % q:
            raise InvalidParameters(f"{q} does not divide {self.q}")
        return ModularMatrix(self.n, q, self.entries)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(e) for e in r) for r in self.entries) + f"] mod {self.q}"


def _trusted_modular(n: int, q: int, rows) -> ModularMatrix:
    # products and adjugates of det-1 matrices: skip the determinant recheck
    m = object.__new__(ModularMatrix)
    object.__setattr__(m, "n", n)
    object.__setattr__(m, "q", q)
    object.__setattr__(m, "entries", tuple(tuple(e % q for e in r) for r in rows))
    return m


def _canonical(num: int, exp: int, p: int) -> tuple[int, int]:
    if num == 0:
        return (0, 0)
    while exp > 0 and num % p == 0:
        num //= p
        exp -= 1
    return (num, exp)


@dataclass(frozen=True)
class LaurentMatrix:
    """An element of SL_n(Z[1/p]).

    Each entry is a pair ``(numerator, exponent)`` meaning
    ``numerator * p**-exponent`` with the exponent minimal.
    """

    n: int
    p: int
    entries: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        if self.p < 3 or not _is_prime(self.p):
            raise InvalidParameters(f"p must be an odd prime, got {self.p}")
        rows = tuple(
            tuple(_canonical(int(num), int(exp), self.p) for num, exp in row) for row in self.entries
        )
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise InvalidParameters(f"expected a {self.n}x{self.n} matrix")
        if any(exp < 0 for row in rows for _, exp in row):
            raise InvalidParameters("exponents must be non-negative")
        object.__setattr__(self, "entries", rows)
        scale, ints = self.scaled_integer()
        if int_det(ints) != self.p ** (self.n * scale):
            raise InvalidDeterminant("determinant is not 1")

    @classmethod
    def from_integers(cls, rows: Sequence[Sequence[int]], p: int) -> LaurentMatrix:
        return cls(len(rows), p, tuple(tuple((e, 0) for e in r) for r in rows))

    @classmethod
    def identity(cls, n: int, p: int) -> LaurentMatrix:
        return cls.from_integers(identity_rows(n), p)

    def max_exponent(self) -> int:
        return max(exp for row in self.entries for _, exp in row)

    def scaled_integer(self) -> tuple[int, IntMatrix]:
        """Return ``(k, p**k * M)`` with the smallest k making the matrix integral."""
        k = self.max_exponent()
        return k, tuple(tuple(num * self.p ** (k - exp) for num, exp in row) for row in self.entries)

    def is_integral(self) -> bool:
        return self.max_exponent() == 0

    def integer_rows(self) -> IntMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return tuple(tuple(num for num, _ in row) for row in self.entries)

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        if (self.n, self.p) != (other.n, other.p):
            raise InvalidParameters("dimension or prime mismatch")
        k1, a = self.scaled_integer()
        k2, b = other.scaled_integer()
        return _from_scaled(self.n, self.p, k1 + k2, int_matmul(a, b))

    def inverse(self) -> LaurentMatrix:
        # adj(p^k M) = p^{k(n-1)} adj(M) and adj(M) = M^{-1} since det M = 1
        k, a = self.scaled_integer()
        return _from_scaled(self.n, self.p, k * (self.n - 1), int_adjugate(a))

    def __pow__(self, k: int) -> LaurentMatrix:
        base = self if k >= 0 else self.inverse()
        result = LaurentMatrix.identity(self.n, self.p)
        for _ in range(abs(k)):
            result = result @ base
        return result

    def reduce_mod(self, q: int) -> ModularMatrix:
        """Image under SL_n(Z[1/p]) -> SL_n(Z/qZ); p is sent to its inverse mod q."""
        if q < 2:
            raise InvalidParameters(f"modulus must be >= 2, got {q}")
        if gcd(q, self.p) != 1:
            raise NotCoprime(f"gcd({q}, {self.p}) != 1")
        pinv = pow(self.p, -1, q)
        rows = tuple(tuple(num * pow(pinv, exp, q) % q for num, exp in row) for row in self.entries)
        return ModularMatrix(self.n, q, rows)

    def entry_text(self, i: int, j: int) -> str:
        num, exp = self.entries[i][j]
        return str(num) if exp == 0 else f"{num}/{self.p}^{exp}"

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(self.entry_text(i, j) for j in range(self.n)) for i in range(self.n)) + "]"


def _from_scaled(n: int, p: int, k: int, rows) -> LaurentMatrix:
    m = object.__new__(LaurentMatrix)
    object.__setattr__(m, "n", n)
    object.__setattr__(m, "p", p)
    object.__setattr__(m, "entries", tuple(tuple(_canonical(e, k, p) for e in r) for r in rows))
    return m


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


# -- text format ------------------------------------------------------------

_ENTRY = re.compile(r"^(-?\d+)(?:/(\d+)(?:\^(\d+))?)?$")


def _parse_entry(token: str, p: int | None) -> tuple[int, int]:
    m = _ENTRY.match(token)
    if not m:
        raise ValueError(f"bad matrix entry {token!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return (num, 0)
    if p is None:
        raise ValueError("fractional entry without an 'inv p' header")
    den, exp = int(m.group(2)), m.group(3)
    if exp is not None:
        if den != p:
            raise ValueError(f"denominator base {den} differs from declared p={p}")
        return (num, int(exp))
    k = 0
    while den > 1 and den % p == 0:
        den //= p
        k += 1
    if den != 1:
        raise ValueError(f"denominator of {token!r} is not a power of {p}")
    return (num, k)


def load_matrices(text: str) -> list[ModularMatrix | LaurentMatrix]:
    """Parse the line format: a ``mod q`` or ``inv p`` header, then one matrix per line."""
    mats: list[ModularMatrix | LaurentMatrix] = []
    mode, value = None, None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] in ("mod", "inv") and len(head) == 2:
            mode, value = head[0], int(head[1])
            continue
        if mode is None:
            raise ValueError("matrix line before a 'mod q' / 'inv p' header")
        n = int(round(len(head) ** 0.5))
        if n * n != len(head):
            raise ValueError(f"{len(head)} entries do not form a square matrix")
        if mode == "mod":
            rows = [[int(t) for t in head[i * n:(i + 1) * n]] for i in range(n)]
            mats.append(ModularMatrix.from_rows(rows, value))
        else:
            entries = [_parse_entry(t, value) for t in head]
            mats.append(LaurentMatrix(n, value, tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))))
    return mats


def dump_matrices(mats: Sequence[ModularMatrix | LaurentMatrix]) -> str:
    lines: list[str] = []
    header = None
    for m in mats:
        h = f"mod {m.q}" if isinstance(m, ModularMatrix) else f"inv {m.p}"
        if h != header:
            lines.append(h)
            header = h
        if isinstance(m, ModularMatrix):
            lines.append(" ".join(str(e) for row in m.entries for e in row))
        else:
            lines.append(" ".join(m.entry_text(i, j) for i in range(m.n) for j in range(m.n)))
    return "\n".join(lines) + "\n"
