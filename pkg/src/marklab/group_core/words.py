"""Freely reduced words over a finite alphabet of generators and their inverses."""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

Letter = tuple[int, int]

DEFAULT_NAMES = "abcdefghijklmnopqrstuvwxyz"


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"exponent sign must be +1 or -1, got {sign}")
        if gen < 0:
            raise ValueError(f"generator index must be non-negative, got {gen}")
        if out and out[-1][0] == gen and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((gen, sign))
    return tuple(out)


class FreeWord:
    """An element of a free group, stored freely reduced.

    Letters are ``(generator_index, sign)`` pairs with 0-based indices.
    Words are immutable, hashable and totally ordered (shortlex on the
    letter alphabet ``s0 < s0' < s1 < s1' < ...``).
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _reduce(letters))
        object.__setattr__(self, "_hash", hash(self.letters))

    def __setattr__(self, name, value):
        raise AttributeError("FreeWord is immutable")

    @classmethod
    def generator(cls, index: int, sign: int = 1) -> FreeWord:
        return cls(((index, sign),))

    @classmethod
    def parse(cls, text: str, names: Sequence[str] = DEFAULT_NAMES) -> FreeWord:
        """Parse ``"a b' a^3 b^-2"`` (or concatenated single-letter names).

        ``'`` marks an inverse; ``^k`` repeats a letter. ``"1"``, ``"e"``
        and the empty string denote the identity.
        """
        text = text.strip()
        if text in ("", "1") or (text == "e" and "e" not in names):
            return cls()
        index = {name: i for i, name in enumerate(names)}
        # longest names first so "abar" wins over "a"
        alternation = "|".join(re.escape(n) for n in sorted(names, key=len, reverse=True))
        token = re.compile(rf"\s*({alternation})('?)(?:\^(-?\d+))?\s*")
        letters: list[Letter] = []
        pos = 0
        while pos < len(text):
            m = token.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse word {text!r} at position {pos}")
            gen = index[m.group(1)]
            sign = -1 if m.group(2) else 1
            power = int(m.group(3)) if m.group(3) is not None else 1
            if power < 0:
                sign, power = -sign, -power
            letters.extend([(gen, sign)] * power)
            pos = m.end()
        return cls(letters)

    def format(self, names: Sequence[str] = DEFAULT_NAMES, sep: str = "") -> str:
        if not self.letters:
            return "1"
        return sep.join(names[g] + ("'" if s < 0 else "") for g, s in self.letters)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"FreeWord({self.format()!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(2 * g + (s < 0) for g, s in self.letters))

    def __lt__(self, other: FreeWord) -> bool:
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> FreeWord:
        return FreeWord((g, -s) for g, s in reversed(self.letters))

    def __pow__(self, k: int) -> FreeWord:
        base = self if k >= 0 else self.inverse()
        return FreeWord(base.letters * abs(k))

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def relabel(self, mapping: Sequence[int]) -> FreeWord:
        return FreeWord((mapping[g], s) for g, s in self.letters)


def letter_code(letter: Letter) -> int:
    """Position of a letter in the alphabet ``s0, s0', s1, s1', ...``."""
    gen, sign = letter
    return 2 * gen + (1 if sign < 0 else 0)


def code_letter(code: int) -> Letter:
    return (code // 2, -1 if code % 2 else 1)


def reduced_words(n_generators: int, length: int) -> Iterator[FreeWord]:
    """All reduced words of exactly ``length`` letters, in shortlex order."""
    alphabet = [code_letter(c) for c in range(2 * n_generators)]

    def extend(prefix: list[Letter]):
        if len(prefix) == length:
            yield FreeWord(prefix)
            return
        for letter in alphabet:
            if prefix and prefix[-1] == (letter[0], -letter[1]):
                continue
            prefix.append(letter)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def count_reduced_words(n_generators: int, max_length: int) -> int:
    """Number of reduced words of length at most ``max_length``."""
    if n_generators == 0:
        return 1
    total, level = 1, 2 * n_generators
    for _ in range(max_length):
        total += level
        level *= 2 * n_generators - 1
    return total
