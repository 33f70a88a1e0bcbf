"""Computable groups: the oracle contract and the concrete instances used throughout.

Elements are plain hashable Python values kept in a canonical form by each
group, so ``==`` and ``hash`` are the group's equality and hash.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Sequence

from ..errors import IndexOutOfRange, InvalidParameters, ResourceLimit
from .matrices import (
    IntMatrix,
    LaurentMatrix,
    ModularMatrix,
    identity_rows,
    int_adjugate,
    int_det,
    int_matmul,
)
from .words import FreeWord

Element = Hashable


class Group:
    """Oracle contract for a group: identity, multiply, invert, equality, hash.

    Subclasses set ``name``, ``identity``, ``is_finite`` and optionally
    ``order_hint``; finite groups also implement :meth:`elements`, which must
    list the identity first and be deterministic.
    """

    name = "G"
    identity: Element = None
    is_finite = False
    order_hint: int | None = None

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def eq(self, g, h) -> bool:
        return g == h

    def hash(self, g) -> int:
        return hash(g)

    def elements(self) -> list:
        raise NotImplementedError(f"{self.name} does not enumerate its elements")

    def power(self, g, k: int):
        base = g if k >= 0 else self.inv(g)
        result = self.identity
        for _ in range(abs(k)):
            result = self.mul(result, base)
        return result

    def order(self) -> int:
        return len(self.elements())

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class IntegerGroup(Group):
    """The additive group Z."""

    name = "Z"
    identity = 0

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g


class CyclicGroup(Group):
    """Z/m written additively, elements 0..m-1."""

    is_finite = True

    def __init__(self, m: int):
        if m < 1:
            raise InvalidParameters(f"cyclic group order must be >= 1, got {m}")
        self.m = m
        self.name = f"C{m}"
        self.identity = 0
        self.order_hint = m

    def mul(self, g, h):
        return (g + h) % self.m

    def inv(self, g):
        return -g % self.m

    def elements(self) -> list:
        return list(range(self.m))


class FreeGroup(Group):
    """The free group on ``rank`` generators; elements are reduced FreeWords."""

    def __init__(self, rank: int):
        self.rank = rank
        self.name = f"F{rank}"
        self.identity = FreeWord()

    def mul(self, g, h):
        return g * h

    def inv(self, g):
        return g.inverse()

    def generators(self) -> tuple[FreeWord, ...]:
        return tuple(FreeWord.generator(i) for i in range(self.rank))


class PermutationGroup(Group):
    """Subgroup of Sym(degree) generated by the given permutations.

    Permutations are tuples of images of 0..degree-1; the product ``g*h``
    applies ``g`` first, then ``h`` (right action, matching the right Cayley
    graph convention).
    """

    is_finite = True

    def __init__(self, generators: Iterable[Sequence[int]], degree: int | None = None, name: str | None = None):
        gens = [tuple(g) for g in generators]
        if degree is None:
            degree = len(gens[0]) if gens else 0
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise InvalidParameters(f"{g} is not a permutation of {degree} points")
        self.degree = degree
        self.gens = tuple(gens)
        self.identity = tuple(range(degree))
        self.name = name or f"Perm({degree})"
        self._elements: list | None = None

    def mul(self, g, h):
        return tuple(h[i] for i in g)

    def inv(self, g):
        out = [0] * len(g)
        for i, gi in enumerate(g):
            out[gi] = i
        return tuple(out)

    def elements(self) -> list:
        if self._elements is None:
            seen = {self.identity}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for g in frontier:
                    for s in self.gens:
                        h = self.mul(g, s)
                        if h not in seen:
                            seen.add(h)
                            nxt.append(h)
                frontier = nxt
            self._elements = sorted(seen)
        return list(self._elements)

    @property
    def order_hint(self):
        return len(self._elements) if self._elements is not None else None


def symmetric_group(n: int) -> PermutationGroup:
    if n < 1:
        raise InvalidParameters("n must be >= 1")
    if n == 1:
        return PermutationGroup([(0,)], name="S1")
    cycle = tuple(list(range(1, n)) + [0])
    swap = (1, 0) + tuple(range(2, n))
    return PermutationGroup([swap, cycle], name=f"S{n}")


def alternating_subgroup(group: PermutationGroup) -> list:
    """Even permutations of ``group``, in the group's element order."""
    return [g for g in group.elements() if _parity(g) == 0]


def _parity(perm: Sequence[int]) -> int:
    seen, parity = set(), 0
    for start in range(len(perm)):
        if start in seen:
            continue
        length, i = 0, start
        while i not in seen:
            seen.add(i)
            i = perm[i]
            length += 1
        parity ^= (length - 1) & 1
    return parity


class DirectProduct(Group):
    """G x H with componentwise operations; elements are pairs."""

    def __init__(self, left: Group, right: Group, name: str | None = None):
        self.left, self.right = left, right
        self.identity = (left.identity, right.identity)
        self.is_finite = left.is_finite and right.is_finite
        self.name = name or f"{left.name}x{right.name}"

    def mul(self, g, h):
        return (self.left.mul(g[0], h[0]), self.right.mul(g[1], h[1]))

    def inv(self, g):
        return (self.left.inv(g[0]), self.right.inv(g[1]))

    def elements(self) -> list:
        return list(itertools.product(self.left.elements(), self.right.elements()))

    @property
    def order_hint(self):
        if self.left.order_hint and self.right.order_hint:
            return self.left.order_hint * self.right.order_hint
        return None


def klein_group() -> DirectProduct:
    return DirectProduct(CyclicGroup(2), CyclicGroup(2), name="C2xC2")


class IntegerMatrixGroup(Group):
    """SL_n(Z) with elements as tuples of integer rows."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"SL{n}(Z)"
        self.identity = identity_rows(n)

    def mul(self, g, h):
        return int_matmul(g, h)

    def inv(self, g):
        return int_adjugate(g)

    def contains(self, g) -> bool:
        return len(g) == self.n and int_det(g) == 1


class ModularMatrixGroup(Group):
    """SL_n(Z/qZ) with ModularMatrix elements."""

    is_finite = True

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        self.name = f"SL{n}(Z/{q})"
        self.identity = ModularMatrix.identity(n, q)

    def mul(self, g, h):
        return g @ h

    def inv(self, g):
        return g.inverse()

    def elements(self, cap: int = 10**6) -> list:
        """All of SL_n(Z/q), identity first, then row-major lexicographic order."""
        n, q = self.n, self.q
        if q ** (n * n) > cap:
            raise ResourceLimit(f"{q}^{n * n} candidate matrices exceed cap {cap}")
        out = [self.identity]
        for flat in itertools.product(range(q), repeat=n * n):
            rows = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
            if int_det(rows) % q == 1 % q and rows != self.identity.entries:
                out.append(ModularMatrix(n, q, rows))
        return out


class LaurentMatrixGroup(Group):
    """SL_n(Z[1/p]) with LaurentMatrix elements."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.name = f"SL{n}(Z[1/{p}])"
        self.identity = LaurentMatrix.identity(n, p)

    def mul(self, g, h):
        return g @ h

    def inv(self, g):
        return g.inverse()


class QuotientGroup(Group):
    """G/N for finite G and a normal subgroup N given by its elements.

    Cosets are represented by their transversal element: the member that
    comes first in ``G.elements()``.
    """

    is_finite = True

    def __init__(self, group: Group, normal: Iterable, name: str | None = None):
        self.group = group
        self.normal = list(normal)
        order = group.elements()
        self.rep: dict = {}
        self.transversal: list = []
        for g in order:
            if g in self.rep:
                continue
            self.transversal.append(g)
            for n in self.normal:
                self.rep[group.mul(n, g)] = g
        self.identity = self.rep[group.identity]
        self.name = name or f"{group.name}/N"
        self.order_hint = len(self.transversal)

    def mul(self, g, h):
        return self.rep[self.group.mul(g, h)]

    def inv(self, g):
        return self.rep[self.group.inv(g)]

    def elements(self) -> list:
        return list(self.transversal)

    def project(self, g):
        return self.rep[g]


def evaluate_word(group: Group, generators: Sequence, word: FreeWord):
    """Image of ``word`` under the homomorphism sending generator i to ``generators[i]``."""
    result = group.identity
    inverses: dict[int, object] = {}
    for gen, sign in word:
        if gen >= len(generators):
            raise IndexOutOfRange(f"letter {gen} but only {len(generators)} generators")
        if sign > 0:
            factor = generators[gen]
        else:
            if gen not in inverses:
                inverses[gen] = group.inv(generators[gen])
            factor = inverses[gen]
        result = group.mul(result, factor)
    return result


def element_order(group: Group, g, bound: int) -> int | None:
    """Least k <= bound with g^k = e, or None if there is none."""
    if bound < 1:
        raise InvalidParameters("bound must be >= 1")
    power = g
    for k in range(1, bound + 1):
        if group.eq(power, group.identity):
            return k
        power = group.mul(power, g)
    return None


def is_subgroup(group: Group, subset: Sequence) -> bool:
    members = set(subset)
    if group.identity not in members:
        return False
    return all(group.mul(a, b) in members for a in members for b in members)


def is_normal(group: Group, subset: Sequence) -> bool:
    members = set(subset)
    if not is_subgroup(group, subset):
        return False
    return all(group.mul(group.mul(g, n), group.inv(g)) in members for g in group.elements() for n in members)




class Subgroup(Group):
    """A finite subgroup given by its elements, listed in the ambient order."""

    is_finite = True

    def __init__(self, ambient: Group, members: Iterable, name: str | None = None):
        wanted = set(members)
        self.ambient = ambient
        self.members = [g for g in ambient.elements() if g in wanted]
        self.identity = ambient.identity
        self.name = name or f"H<{ambient.name}"
        self.order_hint = len(self.members)

    def mul(self, g, h):
        return self.ambient.mul(g, h)

    def inv(self, g):
        return self.ambient.inv(g)

    def elements(self) -> list:
        return list(self.members)


def group_from_name(name: str) -> Group:
    """``cyclic:m`` / ``Cm``, ``sym:n`` / ``Sn``, ``klein`` / ``C2xC2``, ``dihedral:n``, ``a x b`` products."""
    text = name.strip()
    if "x" in text and not text.lower().startswith("klein") and text != "C2xC2":
        parts = text.split("x", 1)
        return DirectProduct(group_from_name(parts[0]), group_from_name(parts[1]))
    low = text.lower()
    if low in ("klein", "c2xc2", "v4"):
        return klein_group()
    if low.startswith("cyclic:"):
        return CyclicGroup(int(low[7:]))
    if low.startswith("sym:"):
        return symmetric_group(int(low[4:]))
    if low.startswith("dihedral:"):
        return dihedral_group(int(low[9:]))
    if low.startswith("c") and low[1:].isdigit():
        return CyclicGroup(int(low[1:]))
    if low.startswith("s") and low[1:].isdigit():
        return symmetric_group(int(low[1:]))
    raise InvalidParameters(f"unknown group {name!r}")


def dihedral_group(n: int) -> PermutationGroup:
    """Symmetries of the n-gon, order 2n."""
    rotation = tuple((i + 1) % n for i in range(n))
    reflection = tuple(-i % n for i in range(n))
    return PermutationGroup([rotation, reflection], name=f"D{n}")


__all__ = [
    "Group",
    "IntegerGroup",
    "CyclicGroup",
    "FreeGroup",
    "PermutationGroup",
    "DirectProduct",
    "IntegerMatrixGroup",
    "ModularMatrixGroup",
    "LaurentMatrixGroup",
    "QuotientGroup",
    "Subgroup",
    "group_from_name",
    "dihedral_group",
    "symmetric_group",
    "klein_group",
    "alternating_subgroup",
    "evaluate_word",
    "element_order",
    "is_subgroup",
    "is_normal",
    "IntMatrix",
]
