"""Valuation table for Z and the cyclic quotients Z/m, plus an ultrametric check."""

import argparse
import itertools
from dataclasses import dataclass

from marklab.group_core import CyclicGroup, IntegerGroup
from marklab.marked_space import MarkedGroup, valuation


@dataclass
class Config:
    m_max: int = 12
    cap: int = 40


def family(m_max):
    yield "Z", MarkedGroup(IntegerGroup(), (1,))
    for m in range(2, m_max + 1):
        yield f"Z/{m}", MarkedGroup(CyclicGroup(m), (1,))


def main(cfg: Config) -> int:
    fam = list(family(cfg.m_max))
    names = [n for n, _ in fam]
    v = {}
    for (i, (_, x)), (j, (_, y)) in itertools.combinations_with_replacement(enumerate(fam), 2):
        v[i, j] = v[j, i] = valuation(x, y, cfg.cap)
    width = max(map(len, names)) + 1
    print(" " * width + "".join(f"{n:>{width}}" for n in names))
    for i, n in enumerate(names):
        cells = (str(v[i, j].value) + ("" if v[i, j].exact else "+") for j in range(len(names)))
        print(f"{n:<{width}}" + "".join(f"{c:>{width}}" for c in cells))
    bad = [
        (i, j, k)
        for i, j, k in itertools.product(range(len(fam)), repeat=3)
        if all(v[e].exact for e in ((i, j), (j, k), (i, k))) and v[i, k].value < min(v[i, j].value, v[j, k].value)
    ]
    print(f"ultrametric violations: {len(bad)}   ('+' marks a lower bound at the cap)")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=Config.m_max)
    ap.add_argument("--cap", type=int, default=Config.cap)
    a = ap.parse_args()
    raise SystemExit(main(Config(a.m_max, a.cap)))
