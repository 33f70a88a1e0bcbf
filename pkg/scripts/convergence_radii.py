"""Convergence radii and stage valuations along the Z and Sanov congruence chains."""

import argparse
from dataclasses import dataclass

from marklab.limits import congruence_chain, convergence_radius
from marklab.marked_space import valuation


@dataclass
class Config:
    family: str = "sanov"
    modulus: int = 3
    length: int = 4
    radius_max: int = 6
    valuation_cap: int = 8


def main(cfg: Config) -> None:
    chain = congruence_chain(cfg.family, cfg.modulus, cfg.length)
    print(f"{cfg.family} chain mod {cfg.modulus}^r, r = 1..{cfg.length}")
    print("R  first stage agreeing with the base on the radius-R kernel ball")
    for R in range(cfg.radius_max + 1):
        print(f"{R:<2} {convergence_radius(chain, R)}")
    print("r  v(base, stage r)")
    for r in chain.indices():
        v = valuation(chain.base, chain.stage(r), cfg.valuation_cap)
        print(f"{r:<2} {v.value}{'' if v.exact else '+'}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["Z", "sanov"], default=Config.family)
    ap.add_argument("--modulus", type=int, default=Config.modulus)
    ap.add_argument("--length", type=int, default=Config.length)
    ap.add_argument("--radius-max", type=int, default=Config.radius_max)
    ap.add_argument("--valuation-cap", type=int, default=Config.valuation_cap)
    a = ap.parse_args()
    main(Config(a.family, a.modulus, a.length, a.radius_max, a.valuation_cap))
