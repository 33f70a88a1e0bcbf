"""o_a versus o_x in SL_n(Z/q) for the images of a = I + 2E12 and x = I + (2/p)E12."""

import argparse
from dataclasses import dataclass

from marklab.slnp_lab import order_sweep


@dataclass
class Config:
    n: int = 3
    primes: tuple = (3, 5)
    q_max: int = 50


def main(cfg: Config) -> int:
    failures = 0
    for p in cfg.primes:
        reports = order_sweep(cfg.n, p, range(2, cfg.q_max + 1))
        failures += sum(not r.holds for r in reports)
        print(f"n={cfg.n} p={p}: " + " ".join(f"{r.q}:{r.o_a}" for r in reports))
    print(f"reports failing o_a = o_x, <a> = <x>, gcd(o_x, p) = 1: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--primes", type=int, nargs="+", default=list(Config.primes))
    ap.add_argument("--q-max", type=int, default=Config.q_max, help="inclusive")
    a = ap.parse_args()
    raise SystemExit(main(Config(a.n, tuple(a.primes), a.q_max)))
