"""Size of the centralizer of the amalgamated generators in GL_n(F_q), per prime q.

This is the pool of twists available to the commutator check; for small q it
can hold fewer than ten elements.
"""

import argparse
from dataclasses import dataclass

from marklab.slnp_lab import amalgamated_generators, centralizer_sample, commuting_basis, make_generators, reduce_mod_q


@dataclass
class Config:
    n: int = 3
    primes: tuple = (3, 5)
    q_values: tuple = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    r: int = 2


def main(cfg: Config) -> None:
    print(f"{'p':>3}{'q':>4}{'dim':>5}{'|C|':>8}")
    for p in cfg.primes:
        gens = make_generators(cfg.n, p)
        for q in cfg.q_values:
            if q % p == 0:
                continue
            images = [reduce_mod_q(w, q) for w in amalgamated_generators(gens, cfg.r)]
            dim = len(commuting_basis(cfg.n, q, images))
            size = len(centralizer_sample(cfg.n, q, images, q**dim)) if q**dim <= 10**5 else None
            print(f"{p:>3}{q:>4}{dim:>5}{size if size is not None else '>1e5':>8}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--r", type=int, default=Config.r)
    a = ap.parse_args()
    main(Config(n=a.n, r=a.r))
