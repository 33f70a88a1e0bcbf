"""Marked groups, Cayley balls, kernel balls and the ultrametric on marked groups.

The letters of a marking ``(s_0, ..., s_{n-1})`` are ordered
``s_0, s_0^-1, s_1, s_1^-1, ...``; this order fixes the canonical BFS
numbering of ball vertices and the lexicographic order on words.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import MarkingLengthMismatch, ResourceLimit
from .group_core.groups import Group, evaluate_word
from .group_core.words import DEFAULT_NAMES, FreeWord, code_letter, count_reduced_words

DEFAULT_VERTEX_CAP = 10**6
DEFAULT_WORD_CAP = 10**6


@dataclass(frozen=True)
class MarkedGroup:
    """A computable group with an ordered generating tuple."""

    group: Group
    marking: tuple
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "marking", tuple(self.marking))
        if self.names is not None and len(self.names) != len(self.marking):
            raise ValueError("one name per marking element")

    @property
    def n(self) -> int:
        return len(self.marking)

    @property
    def letter_names(self) -> Sequence[str]:
        return self.names if self.names is not None else DEFAULT_NAMES[: self.n]

    def letters(self) -> list:
        """Marking elements and their inverses in canonical letter order."""
        out = []
        for s in self.marking:
            out.append(s)
            out.append(self.group.inv(s))
        return out

    def evaluate(self, word: FreeWord):
        return evaluate_word(self.group, self.marking, word)

    def with_identity_appended(self) -> MarkedGroup:
        names = None if self.names is None else self.names + (f"e{self.n}",)
        return MarkedGroup(self.group, self.marking + (self.group.identity,), names)

    def __str__(self) -> str:
        return f"({self.group.name}, {self.n} generators)"


@dataclass
class CayleyBall:
    """Ball of the right Cayley graph, vertices in canonical BFS order.

    ``edges`` holds ``(source, letter, target)`` with ``letter`` the code of
    ``s_i`` (2i) or ``s_i^-1`` (2i+1).
    """

    radius: int
    vertices: list
    norms: list[int]
    words: list[FreeWord]
    edges: list[tuple[int, int, int]]
    root: int = 0
    index: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.vertices)


def ball(mg: MarkedGroup, radius: int, cap: int = DEFAULT_VERTEX_CAP) -> CayleyBall:
    """BFS ball of the given radius around the identity."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    group = mg.group
    letters = mg.letters()
    vertices = [group.identity]
    norms = [0]
    words = [FreeWord()]
    index = {group.identity: 0}
    frontier_start = 0
    for k in range(1, radius + 1):
        frontier_end = len(vertices)
        for v in range(frontier_start, frontier_end):
            g = vertices[v]
            for code, s in enumerate(letters):
                h = group.mul(g, s)
                if h not in index:
                    if len(vertices) >= cap:
                        raise ResourceLimit(f"ball exceeds {cap} vertices at radius {k}")
                    index[h] = len(vertices)
                    vertices.append(h)
                    norms.append(k)
                    words.append(words[v] * FreeWord((code_letter(code),)))
        frontier_start = frontier_end
        if frontier_start == len(vertices):
            break
    edges = []
    for v, g in enumerate(vertices):
        for code, s in enumerate(letters):
            target = index.get(group.mul(g, s))
            if target is not None:
                edges.append((v, code, target))
    return CayleyBall(radius, vertices, norms, words, edges, 0, index)


def ball_encoding(b: CayleyBall) -> bytes:
    """Canonical bytes; equal iff the balls are isomorphic as rooted labeled digraphs."""
    payload = {"radius": b.radius, "vertices": len(b.vertices), "edges": sorted(b.edges)}
    return json.dumps(payload, separators=(",", ":")).encode()


def ball_digest(b: CayleyBall) -> str:
    return hashlib.sha256(ball_encoding(b)).hexdigest()


def ball_adjacency_text(b: CayleyBall) -> str:
    """One ``src label dst`` line per edge; labels are ``i`` or ``i'`` for inverses."""
    lines = []
    for src, code, dst in sorted(b.edges):
        gen, sign = code_letter(code)
        lines.append(f"{src} {gen}{'' if sign > 0 else chr(39)} {dst}")
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class TrivialWordSet:
    """Reduced words of length <= radius that evaluate to the identity."""

    radius: int
    words: frozenset

    def __contains__(self, w: FreeWord) -> bool:
        return w in self.words

    def __len__(self) -> int:
        return len(self.words)

    def sorted(self) -> list[FreeWord]:
        return sorted(self.words)


def trivial_words(mg: MarkedGroup, r: int, cap: int = DEFAULT_WORD_CAP) -> TrivialWordSet:
    """Exact kernel ball: every reduced word of length <= r trivial under the marking."""
    if r < 0:
        raise ValueError("r must be >= 0")
    total = count_reduced_words(mg.n, r)
    if total > cap:
        raise ResourceLimit(f"{total} reduced words of length <= {r} exceed cap {cap}")
    group = mg.group
    letters = mg.letters()
    found = []
    # depth-first over reduced words, carrying the running product
    stack = [((), group.identity)]
    while stack:
        prefix, g = stack.pop()
        if group.eq(g, group.identity):
            found.append(FreeWord(prefix))
        if len(prefix) == r:
            continue
        for code, s in enumerate(letters):
            letter = code_letter(code)
            if prefix and prefix[-1] == (letter[0], -letter[1]):
                continue
            stack.append((prefix + (letter,), group.mul(g, s)))
    return TrivialWordSet(r, frozenset(found))


@dataclass(frozen=True)
class Valuation:
    """Largest agreement radius; ``exact`` is False when agreement reached the cap."""

    value: int
    exact: bool

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


def _check_lengths(mg1: MarkedGroup, mg2: MarkedGroup):
    if mg1.n != mg2.n:
        raise MarkingLengthMismatch(f"marking lengths {mg1.n} and {mg2.n} differ")


def valuation(mg1: MarkedGroup, mg2: MarkedGroup, cap: int, word_cap: int = DEFAULT_WORD_CAP) -> Valuation:
    """Largest r <= cap at which the kernel balls of radius r coincide.

    Words are explored level by level as states (image in mg1, image in mg2,
    last letter); two words with the same state have the same extensions, so
    each state is kept once.
    """
    _check_lengths(mg1, mg2)
    if cap < 0:
        raise ValueError("cap must be >= 0")
    g1, g2 = mg1.group, mg2.group
    l1, l2 = mg1.letters(), mg2.letters()
    level = {(g1.identity, g2.identity, -1)}
    explored = 1
    for r in range(1, cap + 1):
        nxt = set()
        for x, y, last in level:
            for code in range(2 * mg1.n):
                if last >= 0 and code == last ^ 1:
                    continue
                nxt.add((g1.mul(x, l1[code]), g2.mul(y, l2[code]), code))
        explored += len(nxt)
        if explored > word_cap:
            raise ResourceLimit(f"valuation search exceeded {word_cap} states at radius {r}")
        for x, y, _ in nxt:
            if g1.eq(x, g1.identity) != g2.eq(y, g2.identity):
                return Valuation(r - 1, True)
        level = nxt
        if not level:
            break
    return Valuation(cap, False)


def marked_distance(mg1: MarkedGroup, mg2: MarkedGroup, cap: int) -> tuple[Fraction, Fraction]:
    """Bounds on d = 2^-v; a point interval when the valuation is exact."""
    v = valuation(mg1, mg2, cap)
    if v.exact:
        d = Fraction(1, 2**v.value)
        return d, d
    return Fraction(0), Fraction(1, 2**cap)


def word_norm(mg: MarkedGroup, g, cap: int) -> int | None:
    """Word length of ``g`` in the marking, or None if it exceeds ``cap``."""
    group = mg.group
    if group.eq(g, group.identity):
        return 0
    letters = mg.letters()
    seen = {group.identity}
    frontier = [group.identity]
    for k in range(1, cap + 1):
        nxt = []
        for h in frontier:
            for s in letters:
                x = group.mul(h, s)
                if x in seen:
                    continue
                if group.eq(x, g):
                    return k
                seen.add(x)
                nxt.append(x)
        if not nxt:
            return None
        frontier = nxt
    return None


def norms_of(mg: MarkedGroup, targets, cap: int) -> dict:
    """Word norms of the given elements; elements beyond ``cap`` are absent from the result."""
    group = mg.group
    wanted = set(targets)
    found = {}
    if group.identity in wanted:
        found[group.identity] = 0
    letters = mg.letters()
    seen = {group.identity}
    frontier = [group.identity]
    k = 0
    while len(found) < len(wanted) and k < cap and frontier:
        k += 1
        nxt = []
        for h in frontier:
            for s in letters:
                x = group.mul(h, s)
                if x in seen:
                    continue
                seen.add(x)
                nxt.append(x)
                if x in wanted:
                    found[x] = k
        frontier = nxt
    return found
