"""Exact group-ring arithmetic and direct-finiteness verification."""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ExceedsCap, MixedCarriers, PreconditionFailed, ResourceLimit, ShapeMismatch
from .group_core.groups import Group
from .group_core.rings import MatrixRing, Ring
from .group_core.words import FreeWord
from .marked_space import MarkedGroup, ball, norms_of

DEFAULT_ELEMENT_CAP = 2**20


class GroupRingElement:
    """Finite formal sum of group elements with nonzero ring coefficients."""

    __slots__ = ("ring", "group", "terms", "_hash")

    def __init__(self, ring: Ring, group: Group, terms: dict | Iterable = ()):
        self.ring, self.group = ring, group
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for g, c in items:
            acc[g] = ring.add(acc[g], c) if g in acc else c
        self.terms = {g: c for g, c in acc.items() if not ring.is_zero(c)}
        self._hash = None

    @classmethod
    def zero(cls, ring: Ring, group: Group) -> GroupRingElement:
        return cls(ring, group)

    @classmethod
    def one(cls, ring: Ring, group: Group) -> GroupRingElement:
        return cls(ring, group, {group.identity: ring.one})

    @classmethod
    def basis(cls, ring: Ring, group: Group, g, coeff=None) -> GroupRingElement:
        return cls(ring, group, {g: ring.one if coeff is None else coeff})

    def _same_carriers(self, other: GroupRingElement):
        if self.ring is not other.ring or self.group is not other.group:
            raise MixedCarriers(f"{self.ring.name}[{self.group.name}] vs {other.ring.name}[{other.group.name}]")

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        self._same_carriers(other)
        return GroupRingElement(self.ring, self.group, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.ring, self.group, {g: self.ring.neg(c) for g, c in self.terms.items()})

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def __mul__(self, other: GroupRingElement) -> GroupRingElement:
        return gr_mul(self, other)

    def scale(self, c) -> GroupRingElement:
        return GroupRingElement(self.ring, self.group, {g: self.ring.mul(c, k) for g, k in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        if self.ring is not other.ring or self.group is not other.group:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.ring.eq(c, other.terms[g]) for g, c in self.terms.items())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self == GroupRingElement.one(self.ring, self.group)

    def support(self) -> list:
        return list(self.terms)

    def coefficient(self, g):
        return self.terms.get(g, self.ring.zero)

    def __repr__(self) -> str:
        body = " + ".join(f"{self.ring.format(c)}*{g}" for g, c in self.terms.items()) or "0"
        return f"GroupRingElement({body})"


def gr_mul(u: GroupRingElement, v: GroupRingElement) -> GroupRingElement:
    """Convolution product; zero coefficients are pruned."""
    u._same_carriers(v)
    ring, group = u.ring, u.group
    acc: dict = {}
    for h1, r in u.terms.items():
        for h2, s in v.terms.items():
            g = group.mul(h1, h2)
            term = ring.mul(r, s)
            acc[g] = ring.add(acc[g], term) if g in acc else term
    return GroupRingElement(ring, group, acc)


def support_norm(u: GroupRingElement, mg: MarkedGroup, cap: int) -> int:
    """Largest word norm over the support; ExceedsCap if some point lies outside the cap ball."""
    if mg.group is not u.group:
        raise MixedCarriers("marked group does not match the element's group")
    if not u.terms:
        return 0
    norms = norms_of(mg, u.terms, cap)
    for g in u.terms:
        if g not in norms:
            raise ExceedsCap(f"support element {g!r} has norm > {cap}")
    return max(norms.values())


@dataclass(frozen=True)
class PairCheck:
    """Outcome of a direct-finiteness check on a pair with xy = 1."""

    confirmed: bool
    yx: GroupRingElement


def check_direct_pair(x: GroupRingElement, y: GroupRingElement) -> PairCheck:
    xy = gr_mul(x, y)
    if not xy.is_one():
        raise PreconditionFailed(f"xy != 1 (xy = {xy!r})", witness=xy)
    yx = gr_mul(y, x)
    return PairCheck(yx.is_one(), yx)


@dataclass
class FinitenessReport:
    """Exhaustive scan of a finite ring for one-sided units."""

    ring: str
    group: str
    elements: int
    units: int
    violations: list = field(default_factory=list)
    elapsed: float = 0.0
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "ring": self.ring,
            "group": self.group,
            "elements": self.elements,
            "units": self.units,
            "violations": [[list(x), list(y)] for x, y in self.violations],
            "exhaustive": self.exhaustive,
        }
        if timings:
            out["elapsed"] = self.elapsed
        return out


def scan_one_sided_units(
    k: int,
    add_table: np.ndarray,
    mul_table: np.ndarray,
    one: int,
    zero: int,
    group_table: np.ndarray,
    identity: int,
    sigma: np.ndarray | None = None,
    tau: np.ndarray | None = None,
) -> tuple[int, int, list]:
    """Enumerate all pairs of a finite (twisted) group algebra and collect xy = 1.

    Ring elements are indices 0..k-1 with the given tables; group elements
    are indices 0..n-1 with ``group_table[h1, h2] = h1*h2``. ``sigma[h]`` is
    the permutation of ring indices induced by h and ``tau[h1, h2]`` the
    cocycle value; both default to trivial. Returns
    ``(element count, unit count, violations)`` where a violation is a pair
    of coefficient tuples with xy = 1 but yx != 1.
    """
    n = group_table.shape[0]
    if sigma is None:
        sigma = np.tile(np.arange(k), (n, 1))
    if tau is None:
        tau = np.full((n, n), one)
    # pairs (h1, h2) grouped by product g
    by_product = [[(h1, h2) for h1 in range(n) for h2 in range(n) if group_table[h1, h2] == g] for g in range(n)]
    every = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64).reshape(-1, n)
    target = np.full(n, zero)
    target[identity] = one

    def products(x: np.ndarray, ys: np.ndarray) -> np.ndarray:
        out = np.full((ys.shape[0], n), zero, dtype=np.int64)
        for g in range(n):
            acc = out[:, g]
            for h1, h2 in by_product[g]:
                term = mul_table[mul_table[x[h1], sigma[h1][ys[:, h2]]], tau[h1, h2]]
                acc = add_table[acc, term]
            out[:, g] = acc
        return out

    units = 0
    violations = []
    for x in every:
        hits = np.nonzero((products(x, every) == target).all(axis=1))[0]
        for j in hits:
            y = every[j]
            yx = products(y, x.reshape(1, n))[0]
            if (yx == target).all():
                units += 1
            else:
                violations.append((tuple(int(c) for c in x), tuple(int(c) for c in y)))
    return len(every), units, violations


def _ring_tables(ring: Ring) -> tuple[list, np.ndarray, np.ndarray]:
    elems = list(ring.elements())
    index = {e: i for i, e in enumerate(elems)}
    k = len(elems)
    add = np.empty((k, k), dtype=np.int64)
    mul = np.empty((k, k), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            add[i, j] = index[ring.add(a, b)]
            mul[i, j] = index[ring.mul(a, b)]
    return elems, add, mul


def _group_table(group: Group) -> tuple[list, np.ndarray]:
    elems = group.elements()
    index = {g: i for i, g in enumerate(elems)}
    table = np.array([[index[group.mul(a, b)] for b in elems] for a in elems], dtype=np.int64)
    return elems, table


def exhaustive_direct_finiteness(ring: Ring, group: Group, cap: int = DEFAULT_ELEMENT_CAP) -> FinitenessReport:
    """Check xy = 1 => yx = 1 over every pair of elements of ring[group]."""
    start = time.perf_counter()
    if not ring.is_finite or not group.is_finite:
        raise ResourceLimit("exhaustive scan needs a finite ring and a finite group")
    size = ring.size() ** group.order()
    if size > cap:
        raise ResourceLimit(f"{ring.name}[{group.name}] has {size} elements, cap is {cap}")
    relems, add, mul = _ring_tables(ring)
    gelems, table = _group_table(group)
    count, units, raw = scan_one_sided_units(
        len(relems), add, mul, relems.index(ring.one), relems.index(ring.zero), table, gelems.index(group.identity)
    )
    violations = [(tuple(relems[i] for i in x), tuple(relems[i] for i in y)) for x, y in raw]
    return FinitenessReport(ring.name, group.name, count, units, violations, time.perf_counter() - start)


def one_sided_inverse_search(
    u: GroupRingElement, pool: Sequence, support: Sequence, cap: int = DEFAULT_ELEMENT_CAP
) -> GroupRingElement | None:
    """First v (coefficients from ``pool`` on ``support``, in product order) with uv = 1."""
    count = len(pool) ** len(support)
    if count > cap:
        raise ResourceLimit(f"{count} candidates exceed cap {cap}")
    one = GroupRingElement.one(u.ring, u.group)
    for coeffs in itertools.product(pool, repeat=len(support)):
        v = GroupRingElement(u.ring, u.group, zip(support, coeffs))
        if gr_mul(u, v) == one:
            return v
    return None


def bicyclic_unit(ring: Ring, group: Group, g, h, sign: int = 1, order_bound: int = 1000) -> GroupRingElement:
    """1 + sign*(1 - g) h (1 + g + ... + g^{o-1}); its inverse flips the sign.

    The correction term squares to zero because the norm element of <g>
    annihilates 1 - g, so these are units in R[G] for any ring R.
    """
    one = GroupRingElement.one(ring, group)
    k, power, norm_terms = 0, group.identity, []
    while True:
        norm_terms.append((power, ring.one))
        power = group.mul(power, g)
        k += 1
        if power == group.identity:
            break
        if k >= order_bound:
            raise ResourceLimit(f"order of {g!r} exceeds {order_bound}")
    g_hat = GroupRingElement(ring, group, norm_terms)
    one_minus_g = one - GroupRingElement.basis(ring, group, g)
    nil = gr_mul(gr_mul(one_minus_g, GroupRingElement.basis(ring, group, h)), g_hat)
    return one + nil.scale(ring.from_int(sign))


def random_unit_pair(ring: Ring, group: Group, rng, factors: int = 2) -> tuple[GroupRingElement, GroupRingElement]:
    """(x, y) with xy = yx = 1: a signed group element times random bicyclic units."""
    elems = group.elements()
    g0 = rng.choice(elems)
    x = GroupRingElement.basis(ring, group, g0, ring.from_int(rng.choice((1, -1))))
    y = GroupRingElement.basis(ring, group, group.inv(g0), x.terms[g0])
    for _ in range(factors):
        g, h, s = rng.choice(elems), rng.choice(elems), rng.choice((1, -1))
        x = gr_mul(x, bicyclic_unit(ring, group, g, h, s))
        y = gr_mul(bicyclic_unit(ring, group, g, h, -s), y)
    return x, y


def matrix_lift(rows: Sequence[Sequence[GroupRingElement]], k: int | None = None) -> GroupRingElement:
    """Reinterpret a k x k matrix over R[G] as an element of Mat_k(R)[G]."""
    k = len(rows) if k is None else k
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ShapeMismatch(f"expected a {k}x{k} matrix")
    first = rows[0][0]
    ring, group = first.ring, first.group
    for r in rows:
        for e in r:
            if e.ring is not ring or e.group is not group:
                raise MixedCarriers("entries over different carriers")
    mat_ring = _matrix_ring(ring, k)
    support = {g for r in rows for e in r for g in e.terms}
    terms = {}
    for g in support:
        terms[g] = tuple(tuple(e.coefficient(g) for e in r) for r in rows)
    return GroupRingElement(mat_ring, group, terms)


_MATRIX_RINGS: dict = {}


def _matrix_ring(ring: Ring, k: int) -> MatrixRing:
    # one instance per (ring, k) so lifted elements share carriers
    key = (id(ring), k)
    if key not in _MATRIX_RINGS:
        _MATRIX_RINGS[key] = (ring, MatrixRing(ring, k))
    return _MATRIX_RINGS[key][1]


def matrix_product(a: Sequence[Sequence[GroupRingElement]], b: Sequence[Sequence[GroupRingElement]]) -> list:
    """Product in Mat_k(R[G]), computed entry-wise with gr_mul."""
    k = len(a)
    zero = GroupRingElement.zero(a[0][0].ring, a[0][0].group)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = zero
            for t in range(k):
                acc = acc + gr_mul(a[i][t], b[t][j])
            row.append(acc)
        out.append(row)
    return out


# -- element literals ------------------------------------------------------

_TERM = re.compile(r"^\s*(?:([^*]+?)\s*\*\s*)?(.+?)\s*$")


def parse_element(text: str, mg: MarkedGroup, ring: Ring) -> GroupRingElement:
    """Parse ``c1*w1 + c2*w2 - ...``; a bare coefficient is a multiple of the identity."""
    tokens = re.split(r"(?<![\^*])\s*([+-])\s*", " " + text.strip())
    terms = []
    sign = 1
    for tok in tokens:
        if tok in ("+", "-"):
            sign = -1 if tok == "-" else sign
            continue
        if not tok.strip():
            continue
        m = _TERM.match(tok)
        coeff_text, word_text = m.group(1), m.group(2)
        if coeff_text is None and re.fullmatch(r"\d+", word_text):
            coeff, word = ring.parse(word_text), FreeWord()
        else:
            coeff = ring.one if coeff_text is None else ring.parse(coeff_text)
            word = FreeWord.parse(word_text, mg.letter_names)
        if sign < 0:
            coeff = ring.neg(coeff)
        terms.append((mg.evaluate(word), coeff))
        sign = 1
    return GroupRingElement(ring, mg.group, terms)


def format_element(u: GroupRingElement, mg: MarkedGroup, cap: int = 32) -> str:
    """Render with shortest words, terms in canonical ball order."""
    if not u.terms:
        return "0"
    radius = 0
    b = ball(mg, radius)
    while radius < cap and not all(g in b.index for g in u.terms):
        radius += 1
        b = ball(mg, radius)
    ordered = sorted(u.terms.items(), key=lambda item: b.index.get(item[0], len(b)))
    parts = []
    for g, c in ordered:
        i = b.index.get(g)
        word = b.words[i].format(mg.letter_names) if i is not None else repr(g)
        parts.append(f"{u.ring.format(c)}*{word}")
    return " + ".join(parts)
