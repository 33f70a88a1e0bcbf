"""Residual quotient chains, characteristic cores, convergence radii and the
transfer of direct finiteness from finite quotients to their limit.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InvalidSpec, NotReached, OutOfScope, PreconditionFailed
from .group_core.groups import (
    CyclicGroup,
    IntegerGroup,
    IntegerMatrixGroup,
    ModularMatrixGroup,
    PermutationGroup,
)
from .group_core.matrices import ModularMatrix
from .group_core.sanov import SANOV_GENERATORS
from .group_ring import GroupRingElement, gr_mul, support_norm
from .marked_space import DEFAULT_WORD_CAP, MarkedGroup, trivial_words


@dataclass
class CoreQuotient:
    """N/K~ for K~ the intersection of index-d subgroups of N."""

    marked: MarkedGroup
    index: int
    actions: int
    normal_only: bool

    @property
    def order(self) -> int:
        return self.marked.group.order()


def _transitive(perms: Sequence[tuple], d: int) -> bool:
    seen, frontier = {0}, [0]
    while frontier:
        i = frontier.pop()
        for p in perms:
            for j in (p[i], p.index(i)):
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    return len(seen) == d


def characteristic_core(family: str | tuple, d: int, normal_only: bool = False) -> CoreQuotient:
    """Quotient by the intersection of all index-d subgroups of Z or F_k.

    ``family`` is ``"Z"`` or ``("F", k)``. For F_k the quotient is the image
    in the product of all transitive degree-d actions; with
    ``normal_only=True`` only regular actions are kept, which intersects the
    normal index-d subgroups instead.
    """
    if d < 1:
        raise OutOfScope("index must be >= 1")
    if family == "Z":
        return CoreQuotient(MarkedGroup(CyclicGroup(d), (1 % d,)), d, 1, normal_only)
    if not (isinstance(family, tuple) and len(family) == 2 and family[0] == "F"):
        raise OutOfScope(f"unsupported family {family!r}")
    k = family[1]
    if d > 3 or k < 1 or k > 4:
        raise OutOfScope("free-group cores are implemented for index <= 3 and rank <= 4")
    points = list(itertools.permutations(range(d)))
    actions = []
    for perms in itertools.product(points, repeat=k):
        if not _transitive(perms, d):
            continue
        if normal_only and PermutationGroup(perms, d).order() != d:
            continue
        actions.append(perms)
    degree = d * len(actions)
    marking = []
    for i in range(k):
        image = []
        for block, perms in enumerate(actions):
            image.extend(block * d + perms[i][j] for j in range(d))
        marking.append(tuple(image))
    group = PermutationGroup(marking, degree, name=f"F{k}/core{d}")
    return CoreQuotient(MarkedGroup(group, tuple(marking)), d, len(actions), normal_only)


@dataclass
class QuotientChain:
    """A base marked group and nested finite quotients indexed ``start, start+1, ...``.

    ``project(g, r)`` is the quotient map from the base to stage r and
    ``connect(h, r)`` maps stage r+1 onto stage r.
    """

    base: MarkedGroup
    stages: list[MarkedGroup]
    project: Callable
    connect: Callable | None = None
    start: int = 1
    kind: str = "user"
    moduli: list[int] = field(default_factory=list)

    def indices(self) -> range:
        return range(self.start, self.start + len(self.stages))

    def stage(self, r: int) -> MarkedGroup:
        return self.stages[r - self.start]

    def check_nesting(self) -> bool:
        """Markings map to markings under every quotient and connecting map."""
        for r in self.indices():
            st = self.stage(r)
            if tuple(self.project(s, r) for s in self.base.marking) != st.marking:
                return False
            if self.connect is not None and r + 1 in self.indices():
                nxt = self.stage(r + 1)
                if tuple(self.connect(s, r) for s in nxt.marking) != st.marking:
                    return False
        return True


def congruence_chain(family: str, modulus: int, length: int) -> QuotientChain:
    """Stages r = 1..length: (Z/m^r, {1}) or the Sanov generators reduced mod m^r."""
    if modulus < 2 or length < 1:
        raise InvalidSpec("modulus must be >= 2 and length >= 1")
    moduli = [modulus**r for r in range(1, length + 1)]
    if family in ("Z", "z"):
        base = MarkedGroup(IntegerGroup(), (1,))
        stages = [MarkedGroup(CyclicGroup(q), (1 % q,)) for q in moduli]
        return QuotientChain(
            base,
            stages,
            project=lambda g, r: g % modulus**r,
            connect=lambda h, r: h % modulus**r,
            start=1,
            kind="modulus",
            moduli=moduli,
        )
    if family in ("sanov", "Sanov"):
        base = MarkedGroup(IntegerMatrixGroup(2), SANOV_GENERATORS)
        stages = [
            MarkedGroup(ModularMatrixGroup(2, q), tuple(ModularMatrix.from_rows(s, q) for s in SANOV_GENERATORS))
            for q in moduli
        ]
        return QuotientChain(
            base,
            stages,
            project=lambda g, r: ModularMatrix.from_rows(g, modulus**r),
            connect=lambda h, r: h.reduce(modulus**r),
            start=1,
            kind="congruence",
            moduli=moduli,
        )
    raise InvalidSpec(f"unknown chain family {family!r}")


def chain_from_spec(spec: dict | str) -> QuotientChain:
    """Build a congruence chain from ``{"family", "modulus", "length"}`` (dict or JSON text)."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    try:
        return congruence_chain(spec["family"], int(spec["modulus"]), int(spec["length"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad chain spec {spec!r}: {exc}") from None


def finite_base_chain(base: MarkedGroup) -> QuotientChain:
    """A finite marked group as the one-stage chain of itself (stage 0)."""
    return QuotientChain(base, [base], project=lambda g, r: g, start=0, kind="finite-base")


def convergence_radius(chain: QuotientChain, radius: int, cap: int = DEFAULT_WORD_CAP) -> int | None:
    """Least stage whose kernel ball of the given radius equals the base's, or None."""
    target = trivial_words(chain.base, radius, cap)
    for r in chain.indices():
        if trivial_words(chain.stage(r), radius, cap) == target:
            return r
    return None


@dataclass
class TransferCertificate:
    m: int
    radius: int
    stage: int
    verdict: str
    direct_verdict: str
    timings: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.verdict == self.direct_verdict

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "m": self.m,
            "radius": self.radius,
            "stage": self.stage,
            "verdict": self.verdict,
            "direct_verdict": self.direct_verdict,
            "consistent": self.consistent,
        }
        if timings:
            out["timings"] = self.timings
        return out


def project_element(u: GroupRingElement, chain: QuotientChain, r: int) -> GroupRingElement:
    """Coefficient-wise image of a base group-ring element in stage r."""
    stage = chain.stage(r)
    return GroupRingElement(u.ring, stage.group, [(chain.project(g, r), c) for g, c in u.terms.items()])


def limit_transfer(
    x: GroupRingElement, y: GroupRingElement, chain: QuotientChain, norm_cap: int = 64, word_cap: int = DEFAULT_WORD_CAP
) -> TransferCertificate:
    """Certify yx = 1 from a finite quotient that agrees with the base on a large enough ball.

    The stage used agrees with the base on trivial words up to radius 3m,
    where m bounds the word norms of the supports of x, y and yx.
    """
    clock = {}
    t0 = time.perf_counter()
    xy = gr_mul(x, y)
    if not xy.is_one():
        raise PreconditionFailed("xy != 1 in the base", witness=xy)
    yx = gr_mul(y, x)
    direct = "confirmed" if yx.is_one() else "violation"
    m = max(support_norm(u, chain.base, norm_cap) for u in (x, y, yx))
    clock["norms"] = time.perf_counter() - t0
    radius = 3 * m
    t1 = time.perf_counter()
    r = convergence_radius(chain, radius, word_cap)
    clock["convergence"] = time.perf_counter() - t1
    if r is None:
        raise NotReached(f"no stage agrees with the base up to radius {radius}")
    t2 = time.perf_counter()
    px, py = project_element(x, chain, r), project_element(y, chain, r)
    verdict = "confirmed" if gr_mul(py, px).is_one() else "violation"
    clock["quotient"] = time.perf_counter() - t2
    return TransferCertificate(m, radius, r, verdict, direct, clock)
