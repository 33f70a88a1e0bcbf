"""Membership in the Sanov subgroup <a, b> of SL_2(Z).

a = [[1, 2], [0, 1]] and b = [[1, 0], [2, 1]] generate a free group of
rank 2. Membership is decided by greedy ping-pong reduction: repeatedly
strip the leading letter that strictly lowers the maximum column sum.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import InvalidDeterminant
from .matrices import IntMatrix, int_det, int_matmul
from .words import FreeWord

SANOV_A: IntMatrix = ((1, 2), (0, 1))
SANOV_B: IntMatrix = ((1, 0), (2, 1))
SANOV_GENERATORS = (SANOV_A, SANOV_B)

# inverse of each letter, keyed by (generator, sign); a-letters first for tie-breaks
_STRIP = (
    ((0, 1), ((1, -2), (0, 1))),
    ((0, -1), ((1, 2), (0, 1))),
    ((1, 1), ((1, 0), (-2, 1))),
    ((1, -1), ((1, 0), (2, 1))),
)


def column_sum_norm(m: Sequence[Sequence[int]]) -> int:
    return max(abs(m[0][j]) + abs(m[1][j]) for j in range(2))


def sanov_membership(m: Sequence[Sequence[int]]) -> FreeWord | None:
    """Return the reduced word in a, b (generators 0, 1) equal to ``m``, or None.

    Raises InvalidDeterminant unless det(m) = 1.
    """
    current = tuple(tuple(int(e) for e in row) for row in m)
    if len(current) != 2 or any(len(r) != 2 for r in current):
        raise ValueError("expected a 2x2 integer matrix")
    if int_det(current) != 1:
        raise InvalidDeterminant(f"det = {int_det(current)}")
    letters: list[tuple[int, int]] = []
    identity = ((1, 0), (0, 1))
    while current != identity:
        norm = column_sum_norm(current)
        best = None
        for letter, inverse in _STRIP:
            candidate = int_matmul(inverse, current)
            cand_norm = column_sum_norm(candidate)
            if cand_norm < norm and (best is None or cand_norm < best[0]):
                best = (cand_norm, letter, candidate)
        if best is None:
            return None
        letters.append(best[1])
        current = best[2]
    return FreeWord(letters)
