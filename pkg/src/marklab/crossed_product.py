"""Crossed products R*G: cocycle validation, twisted convolution, classification
and the decomposition R*G = (R*N)*(G/N).

Conventions: ``sigma[g]`` is a ring automorphism applied on the left,
``sigma[g](r)``; composing ``r^{sigma(g2) sigma(g1)}`` means
``sigma[g1](sigma[g2](r))``. The product of basis symbols is
``(r g1)(s g2) = r * sigma[g1](s) * tau(g1, g2) (g1 g2)``.
"""

from __future__ import annotations

import enum
import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import MixedCarriers, NotNormal, ResourceLimit, UnvalidatedSystem
from .group_core.groups import Group, QuotientGroup, Subgroup, group_from_name, is_normal
from .group_core.rings import Ring, ring_from_name
from .group_ring import DEFAULT_ELEMENT_CAP, FinitenessReport, _group_table, _ring_tables, scan_one_sided_units


class RingAutomorphism:
    """A ring automorphism with an explicit inverse (the invertibility witness)."""

    def __init__(self, name: str, forward: Callable, backward: Callable):
        self.name = name
        self.forward = forward
        self.backward = backward

    def __call__(self, r):
        return self.forward(r)

    @classmethod
    def identity(cls) -> RingAutomorphism:
        return cls("id", lambda r: r, lambda r: r)

    @classmethod
    def from_table(cls, ring: Ring, table: dict | Sequence, name: str = "table") -> RingAutomorphism:
        """Build from images of ``ring.elements()`` (a dict or a list in element order)."""
        elems = list(ring.elements())
        mapping = dict(table) if isinstance(table, dict) else dict(zip(elems, table))
        if sorted(map(repr, mapping.values())) != sorted(map(repr, elems)) or len(mapping) != len(elems):
            raise ValueError(f"automorphism table {name!r} is not a bijection of {ring.name}")
        inverse = {v: k for k, v in mapping.items()}
        return cls(name, mapping.__getitem__, inverse.__getitem__)

    def __repr__(self) -> str:
        return f"RingAutomorphism({self.name})"


class CrossedKind(enum.Enum):
    GROUP_RING = "group_ring"
    TWISTED = "twisted"
    SKEW = "skew"
    GENERAL = "general"


class CrossedProductSystem:
    """Coefficient ring, group, action ``sigma`` and cocycle ``tau``.

    Missing ``sigma`` entries are the identity automorphism and missing
    ``tau`` entries are 1. Infinite rings are validated on ``ring_sample``.
    The system must pass :func:`validate_cocycle` before multiplication.
    """

    def __init__(
        self,
        ring: Ring,
        group: Group,
        sigma: dict | None = None,
        tau: dict | None = None,
        ring_sample: Sequence | None = None,
        name: str | None = None,
    ):
        self.ring, self.group = ring, group
        self._sigma = dict(sigma or {})
        self._tau = dict(tau or {})
        self._identity_aut = RingAutomorphism.identity()
        if ring_sample is None:
            ring_sample = list(ring.elements()) if ring.is_finite else list(range(-3, 4))
        self.ring_sample = list(ring_sample)
        self.name = name or f"{ring.name}*{group.name}"
        self.validated = False

    def sigma(self, g) -> RingAutomorphism:
        return self._sigma.get(g, self._identity_aut)

    def tau(self, g, h):
        return self._tau.get((g, h), self.ring.one)

    def one(self) -> CrossedElement:
        return CrossedElement(self, {self.group.identity: self.ring.one})

    def basis(self, g, coeff=None) -> CrossedElement:
        return CrossedElement(self, {g: self.ring.one if coeff is None else coeff})

    def basis_inverse(self, g) -> CrossedElement:
        """Two-sided inverse of the basis symbol of g."""
        ginv = self.group.inv(g)
        t_inv = self.ring.try_inverse(self.tau(g, ginv))
        return CrossedElement(self, {ginv: self.sigma(g).backward(t_inv)})

    def elements(self) -> Iterable[CrossedElement]:
        gelems = self.group.elements()
        for coeffs in itertools.product(list(self.ring.elements()), repeat=len(gelems)):
            yield CrossedElement(self, zip(gelems, coeffs))

    def __repr__(self) -> str:
        return f"<CrossedProductSystem {self.name}>"


@dataclass
class CocycleReport:
    valid: bool
    violations: list = field(default_factory=list)

    def kinds(self) -> set:
        return {v["kind"] for v in self.violations}


def validate_cocycle(system: CrossedProductSystem, max_violations: int = 1000) -> CocycleReport:
    """Check normalization, automorphism, unit, cocycle and twisted-action identities.

    Every group triple is checked (the group must be finite); ring elements
    range over ``system.ring_sample``. On success the system is marked
    validated.
    """
    ring, group = system.ring, system.group
    elems = group.elements()
    e = group.identity
    sample = system.ring_sample
    out: list = []

    def flag(kind, **detail):
        if len(out) < max_violations:
            out.append({"kind": kind, **{k: repr(v) for k, v in detail.items()}})

    for r in sample:
        if not ring.eq(system.sigma(e)(r), r):
            flag("sigma_identity", r=r)
    for g in elems:
        aut = system.sigma(g)
        if not ring.eq(aut(ring.one), ring.one):
            flag("sigma_not_unital", g=g)
        for r in sample:
            if not ring.eq(aut.backward(aut(r)), r) or not ring.eq(aut(aut.backward(r)), r):
                flag("sigma_not_invertible", g=g, r=r)
            for s in sample:
                if not ring.eq(aut(ring.add(r, s)), ring.add(aut(r), aut(s))):
                    flag("sigma_not_additive", g=g, r=r, s=s)
                if not ring.eq(aut(ring.mul(r, s)), ring.mul(aut(r), aut(s))):
                    flag("sigma_not_multiplicative", g=g, r=r, s=s)
    for g in elems:
        if not ring.eq(system.tau(e, g), ring.one) or not ring.eq(system.tau(g, e), ring.one):
            flag("tau_normalization", g=g)
    inverses = {}
    for g1 in elems:
        for g2 in elems:
            t = system.tau(g1, g2)
            inv = ring.try_inverse(t)
            if inv is None:
                flag("tau_not_unit", g1=g1, g2=g2, tau=t)
            inverses[(g1, g2)] = inv
    for g1, g2, g3 in itertools.product(elems, repeat=3):
        g12, g23 = group.mul(g1, g2), group.mul(g2, g3)
        lhs = ring.mul(system.tau(g1, g2), system.tau(g12, g3))
        rhs = ring.mul(system.sigma(g1)(system.tau(g2, g3)), system.tau(g1, g23))
        if not ring.eq(lhs, rhs):
            flag("cocycle", g1=g1, g2=g2, g3=g3)
    for g1, g2 in itertools.product(elems, repeat=2):
        t, t_inv = system.tau(g1, g2), inverses[(g1, g2)]
        if t_inv is None:
            continue
        g12 = group.mul(g1, g2)
        for r in sample:
            lhs = system.sigma(g1)(system.sigma(g2)(r))
            rhs = ring.mul(ring.mul(t, system.sigma(g12)(r)), t_inv)
            if not ring.eq(lhs, rhs):
                flag("twisted_action", g1=g1, g2=g2, r=r)
    system.validated = not out
    return CocycleReport(not out, out)


class CrossedElement:
    """Finite sum of basis symbols with nonzero coefficients in a crossed product."""

    __slots__ = ("system", "terms", "_hash")

    def __init__(self, system: CrossedProductSystem, terms: dict | Iterable = ()):
        self.system = system
        ring = system.ring
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for g, c in items:
            acc[g] = ring.add(acc[g], c) if g in acc else c
        self.terms = {g: c for g, c in acc.items() if not ring.is_zero(c)}
        self._hash = None

    def __add__(self, other: CrossedElement) -> CrossedElement:
        _same_system(self, other)
        return CrossedElement(self.system, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> CrossedElement:
        ring = self.system.ring
        return CrossedElement(self.system, {g: ring.neg(c) for g, c in self.terms.items()})

    def __sub__(self, other: CrossedElement) -> CrossedElement:
        return self + (-other)

    def __mul__(self, other: CrossedElement) -> CrossedElement:
        return cp_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrossedElement):
            return NotImplemented
        if self.system is not other.system or self.terms.keys() != other.terms.keys():
            return False
        ring = self.system.ring
        return all(ring.eq(c, other.terms[g]) for g, c in self.terms.items())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_one(self) -> bool:
        return self == self.system.one()

    def coefficient(self, g):
        return self.terms.get(g, self.system.ring.zero)

    def __repr__(self) -> str:
        ring = self.system.ring
        body = " + ".join(f"{ring.format(c)}*[{g}]" for g, c in self.terms.items()) or "0"
        return f"CrossedElement({body})"


def _same_system(u: CrossedElement, v: CrossedElement):
    if u.system is not v.system:
        raise MixedCarriers(f"{u.system.name} vs {v.system.name}")


def cp_mul(u: CrossedElement, v: CrossedElement) -> CrossedElement:
    """Twisted convolution sum over h1 h2 = g of r_h1 * sigma(h1)(s_h2) * tau(h1, h2)."""
    _same_system(u, v)
    system = u.system
    if not system.validated:
        raise UnvalidatedSystem(f"{system.name} has not passed validate_cocycle")
    ring, group = system.ring, system.group
    acc: dict = {}
    for h1, r in u.terms.items():
        aut = system.sigma(h1)
        for h2, s in v.terms.items():
            g = group.mul(h1, h2)
            term = ring.mul(ring.mul(r, aut(s)), system.tau(h1, h2))
            acc[g] = ring.add(acc[g], term) if g in acc else term
    return CrossedElement(system, acc)


def _sigma_trivial(system: CrossedProductSystem) -> bool:
    ring = system.ring
    return all(ring.eq(system.sigma(g)(r), r) for g in system.group.elements() for r in system.ring_sample)


def _tau_trivial(system: CrossedProductSystem) -> bool:
    ring, elems = system.ring, system.group.elements()
    return all(ring.eq(system.tau(g, h), ring.one) for g in elems for h in elems)


def classify(system: CrossedProductSystem) -> CrossedKind:
    if not system.validated:
        raise UnvalidatedSystem(f"{system.name} has not passed validate_cocycle")
    sigma_triv, tau_triv = _sigma_trivial(system), _tau_trivial(system)
    if sigma_triv and tau_triv:
        return CrossedKind.GROUP_RING
    if sigma_triv:
        return CrossedKind.TWISTED
    if tau_triv:
        return CrossedKind.SKEW
    return CrossedKind.GENERAL


class CrossedProductRing(Ring):
    """The crossed product of a validated system, viewed as a coefficient ring."""

    def __init__(self, system: CrossedProductSystem):
        if not system.validated:
            raise UnvalidatedSystem(f"{system.name} has not passed validate_cocycle")
        self.system = system
        self.name = f"({system.name})"
        self.is_finite = system.ring.is_finite and system.group.is_finite
        self.is_commutative = False
        self.zero = CrossedElement(system)
        self.one = system.one()

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return cp_mul(x, y)

    def neg(self, x):
        return -x

    def elements(self):
        return self.system.elements()

    def from_int(self, k: int):
        return CrossedElement(self.system, {self.system.group.identity: self.system.ring.from_int(k)})

    def format(self, x) -> str:
        ring = self.system.ring
        return "(" + (" + ".join(f"{ring.format(c)}*[{g}]" for g, c in x.terms.items()) or "0") + ")"


@dataclass
class Decomposition:
    """(R*N)*(G/N) together with the support-level bijection to R*G."""

    original: CrossedProductSystem
    normal: Subgroup
    inner: CrossedProductSystem
    system: CrossedProductSystem
    quotient: QuotientGroup

    def forward(self, u: CrossedElement) -> CrossedElement:
        """R*G -> (R*N)*(G/N): write each g as n t with t the coset representative."""
        orig, ring, group = self.original, self.original.ring, self.original.group
        buckets: dict = {}
        for g, r in u.terms.items():
            t = self.quotient.project(g)
            n = group.mul(g, group.inv(t))
            coeff = ring.mul(r, ring.try_inverse(orig.tau(n, t)))
            buckets.setdefault(t, []).append((n, coeff))
        return CrossedElement(self.system, {t: CrossedElement(self.inner, terms) for t, terms in buckets.items()})

    def backward(self, w: CrossedElement) -> CrossedElement:
        acc = CrossedElement(self.original)
        for t, s in w.terms.items():
            acc = acc + cp_mul(CrossedElement(self.original, s.terms), self.original.basis(t))
        return acc


def decompose(system: CrossedProductSystem, normal: Iterable) -> Decomposition:
    """Rewrite R*G as a crossed product of G/N over R*N.

    Coset representatives are the first members of each coset in
    ``G.elements()``. The induced action is conjugation by representatives
    and the induced cocycle is ``t1 t2 (t_{q1 q2})^-1``.
    """
    if not system.validated:
        raise UnvalidatedSystem(f"{system.name} has not passed validate_cocycle")
    group = system.group
    members = list(normal)
    if not is_normal(group, members):
        raise NotNormal("subgroup is not normal")
    sub = Subgroup(group, members, name=f"N<{group.name}")
    inner = CrossedProductSystem(
        system.ring,
        sub,
        {g: system.sigma(g) for g in sub.elements()},
        {(g, h): system.tau(g, h) for g in sub.elements() for h in sub.elements()},
        ring_sample=system.ring_sample,
        name=f"{system.ring.name}*{sub.name}",
    )
    if not validate_cocycle(inner).valid:
        raise UnvalidatedSystem("restriction to N failed validation")
    inner_ring = CrossedProductRing(inner)
    quotient = QuotientGroup(group, sub.elements(), name=f"{group.name}/N")

    def lift(s: CrossedElement) -> CrossedElement:
        return CrossedElement(system, s.terms)

    def restrict(x: CrossedElement) -> CrossedElement:
        return CrossedElement(inner, x.terms)

    basis = {t: system.basis(t) for t in quotient.elements()}
    basis_inv = {t: system.basis_inverse(t) for t in quotient.elements()}
    sigma = {}
    for t in quotient.elements():
        bt, bti = basis[t], basis_inv[t]
        sigma[t] = RingAutomorphism(
            f"conj[{t}]",
            lambda s, bt=bt, bti=bti: restrict(cp_mul(cp_mul(bt, lift(s)), bti)),
            lambda s, bt=bt, bti=bti: restrict(cp_mul(cp_mul(bti, lift(s)), bt)),
        )
    tau = {}
    for t1 in quotient.elements():
        for t2 in quotient.elements():
            t12 = quotient.mul(t1, t2)
            tau[(t1, t2)] = restrict(cp_mul(cp_mul(basis[t1], basis[t2]), basis_inv[t12]))
    ring_sample = list(inner_ring.elements()) if inner_ring.is_finite else [inner_ring.one]
    outer = CrossedProductSystem(
        inner_ring, quotient, sigma, tau, ring_sample=ring_sample, name=f"({inner.name})*{quotient.name}"
    )
    validate_cocycle(outer)
    return Decomposition(system, sub, inner, outer, quotient)


def exhaustive_direct_finiteness_crossed(system: CrossedProductSystem, cap: int = DEFAULT_ELEMENT_CAP) -> FinitenessReport:
    """Exhaustive xy = 1 => yx = 1 scan of a finite crossed product."""
    start = time.perf_counter()
    if not system.validated:
        raise UnvalidatedSystem(f"{system.name} has not passed validate_cocycle")
    ring, group = system.ring, system.group
    if not (ring.is_finite and group.is_finite):
        raise ResourceLimit("exhaustive scan needs a finite ring and a finite group")
    relems = list(ring.elements())
    size = len(relems) ** group.order()
    if size > cap:
        raise ResourceLimit(f"{system.name} has {size} elements, cap is {cap}")
    relems, add, mul = _ring_tables(ring)
    index = {r: i for i, r in enumerate(relems)}
    gelems, table = _group_table(group)
    sigma = np.array([[index[system.sigma(g)(r)] for r in relems] for g in gelems], dtype=np.int64)
    tau = np.array([[index[system.tau(g, h)] for h in gelems] for g in gelems], dtype=np.int64)
    count, units, raw = scan_one_sided_units(
        len(relems), add, mul, index[ring.one], index[ring.zero], table, gelems.index(group.identity), sigma, tau
    )
    violations = [(tuple(relems[i] for i in x), tuple(relems[i] for i in y)) for x, y in raw]
    return FinitenessReport(ring.name, f"{group.name} ({system.name})", count, units, violations, time.perf_counter() - start)


# -- stock systems -------------------------------------------------------------


def trivial_system(ring: Ring, group: Group, **kw) -> CrossedProductSystem:
    return CrossedProductSystem(ring, group, name=kw.pop("name", f"{ring.name}[{group.name}]"), **kw)


def frobenius_system() -> CrossedProductSystem:
    """F4 with C2 acting by the Frobenius x -> x^2, trivial cocycle (a skew group ring)."""
    from .group_core.groups import CyclicGroup
    from .group_core.rings import GF4

    f4, c2 = GF4(), CyclicGroup(2)
    frob = RingAutomorphism.from_table(f4, [f4.frobenius(x) for x in f4.elements()], name="frobenius")
    return CrossedProductSystem(f4, c2, {1: frob}, name="F4*C2 (Frobenius)")


def twisted_sign_system() -> CrossedProductSystem:
    """Z with C2, trivial action and tau(s, s) = -1 (a twisted group ring)."""
    from .group_core.groups import CyclicGroup
    from .group_core.rings import Integers

    return CrossedProductSystem(Integers(), CyclicGroup(2), tau={(1, 1): -1}, name="Z^t[C2]")


def planted_defects() -> dict[str, CrossedProductSystem]:
    """Systems that must fail validation, keyed by the identity they break."""
    from .group_core.groups import CyclicGroup
    from .group_core.rings import GF4, Integers, IntegersMod

    f4 = GF4()
    frob = RingAutomorphism.from_table(f4, [f4.frobenius(x) for x in f4.elements()], name="frobenius")
    return {
        "tau_normalization": CrossedProductSystem(Integers(), CyclicGroup(2), tau={(0, 1): -1}, name="defect:normalization"),
        "cocycle": CrossedProductSystem(IntegersMod(5), CyclicGroup(3), tau={(1, 1): 2}, name="defect:cocycle"),
        "twisted_action": CrossedProductSystem(f4, CyclicGroup(3), {1: frob, 2: frob}, name="defect:action"),
        "tau_not_unit": CrossedProductSystem(IntegersMod(4), CyclicGroup(2), tau={(1, 1): 2}, name="defect:nonunit"),
    }


# -- system description files -------------------------------------------------------


def load_system(data: dict | str) -> CrossedProductSystem:
    """Build a system from its JSON description.

    Keys: ``group`` (e.g. ``"cyclic:2"``), ``ring`` (e.g. ``"F4"``), optional
    ``sigma`` mapping a group-element index to a permutation of ring-element
    indices, optional ``tau`` as a |G| x |G| table of ring literals.
    """
    if isinstance(data, str):
        data = json.loads(data)
    group = group_from_name(data["group"])
    ring = ring_from_name(data["ring"])
    gelems = group.elements()
    sigma = {}
    for key, perm in (data.get("sigma") or {}).items():
        relems = list(ring.elements())
        sigma[gelems[int(key)]] = RingAutomorphism.from_table(ring, [relems[i] for i in perm], name=f"sigma[{key}]")
    tau = {}
    table = data.get("tau")
    if table is not None:
        for i, row in enumerate(table):
            for j, lit in enumerate(row):
                tau[(gelems[i], gelems[j])] = ring.parse(str(lit))
    sample = None
    if "ring_sample" in data:
        sample = [ring.parse(str(x)) for x in data["ring_sample"]]
    return CrossedProductSystem(ring, group, sigma, tau, ring_sample=sample, name=data.get("name"))


def dump_system(system: CrossedProductSystem, group_name: str, ring_name: str) -> dict:
    gelems = system.group.elements()
    ring = system.ring
    out: dict = {"group": group_name, "ring": ring_name, "name": system.name}
    if ring.is_finite:
        relems = list(ring.elements())
        index = {r: i for i, r in enumerate(relems)}
        out["sigma"] = {
            str(i): [index[system.sigma(g)(r)] for r in relems]
            for i, g in enumerate(gelems)
            if any(system.sigma(g)(r) != r for r in relems)
        }
    out["tau"] = [[ring.format(system.tau(g, h)) for h in gelems] for g in gelems]
    return out
