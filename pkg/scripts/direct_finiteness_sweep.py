"""Exhaustive xy = 1 => yx = 1 scans over small finite group rings, with timings."""

import argparse
from dataclasses import dataclass, field

from marklab.group_core import group_from_name, ring_from_name
from marklab.group_ring import exhaustive_direct_finiteness

DEFAULT_CASES = [
    "Z/2@C2", "Z/2@C3", "Z/3@C3", "Z/2@S3", "Z/2@C2xC2", "Z/2@C4", "Z/2@dihedral:4",
    "Z/3@S3", "Z/2@dihedral:5", "F4@C4", "Mat2(Z/2)@C2",
]


@dataclass
class Config:
    cases: list = field(default_factory=lambda: list(DEFAULT_CASES))
    cap: int = 2**12


def main(cfg: Config) -> int:
    print(f"{'case':<18}{'elements':>10}{'units':>8}{'violations':>12}{'seconds':>10}")
    total = 0
    for case in cfg.cases:
        ring_name, group_name = case.split("@")
        rep = exhaustive_direct_finiteness(ring_from_name(ring_name), group_from_name(group_name), cap=cfg.cap)
        print(f"{case:<18}{rep.elements:>10}{rep.units:>8}{len(rep.violations):>12}{rep.elapsed:>10.3f}")
        total += len(rep.violations)
    return 1 if total else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("cases", nargs="*", default=DEFAULT_CASES, help="RING@GROUP pairs")
    ap.add_argument("--cap", type=int, default=Config.cap)
    a = ap.parse_args()
    raise SystemExit(main(Config(a.cases, a.cap)))
