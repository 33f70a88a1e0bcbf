"""Classify R[G] = (R[N]) * (G/N) for every normal subgroup N of a few small groups."""

import argparse
import itertools
from dataclasses import dataclass

from marklab.crossed_product import classify, decompose, trivial_system, validate_cocycle
from marklab.group_core import group_from_name, ring_from_name


@dataclass
class Config:
    ring: str = "Z/2"
    groups: tuple = ("S3", "dihedral:4", "C2xC2", "C4")


def subgroups(group):
    """All subgroups, by closing subsets of size <= 2 (enough for these small groups)."""
    elems = group.elements()
    seen = set()
    for pair in itertools.combinations_with_replacement(elems, 2):
        sub = {group.identity}
        frontier = list(pair)
        while frontier:
            g = frontier.pop()
            if g in sub:
                continue
            sub.add(g)
            frontier.extend(group.mul(g, h) for h in list(sub))
            frontier.extend(group.mul(h, g) for h in list(sub))
        key = frozenset(sub)
        if key not in seen:
            seen.add(key)
            yield sorted(sub, key=elems.index)


def is_normal(group, sub):
    s = set(sub)
    return all(group.mul(group.mul(g, h), group.inv(g)) in s for g in group.elements() for h in sub)


def main(cfg: Config) -> None:
    ring = ring_from_name(cfg.ring)
    for name in cfg.groups:
        group = group_from_name(name)
        system = trivial_system(ring, group)
        validate_cocycle(system)
        for sub in subgroups(group):
            if not is_normal(group, sub) or len(sub) in (1, len(group.elements())):
                continue
            dec = decompose(system, sub)
            print(f"{cfg.ring}[{name}] over |N| = {len(sub)}: {classify(dec.system).name}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ring", default=Config.ring)
    ap.add_argument("groups", nargs="*", default=list(Config.groups))
    a = ap.parse_args()
    main(Config(a.ring, tuple(a.groups)))
