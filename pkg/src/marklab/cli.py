"""Command-line experiments with deterministic JSON / CSV reports.

Exit codes: 0 success, 1 a verified mathematical violation, 2 usage error,
3 resource limit. Reports are byte-identical for identical config and seed;
wall-clock timings go to a ``<out>.timings.json`` sidecar next to ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .crossed_product import (
    classify,
    cp_mul,
    decompose,
    exhaustive_direct_finiteness_crossed,
    frobenius_system,
    load_system,
    planted_defects,
    trivial_system,
    twisted_sign_system,
    validate_cocycle,
)
from .errors import MarkLabError, ResourceLimit
from .group_core.groups import (
    CyclicGroup,
    FreeGroup,
    IntegerGroup,
    IntegerMatrixGroup,
    PermutationGroup,
    alternating_subgroup,
    group_from_name,
)
from .group_core.rings import ring_from_name
from .group_core.sanov import SANOV_GENERATORS
from .group_ring import exhaustive_direct_finiteness, format_element, gr_mul, parse_element, random_unit_pair
from .limits import congruence_chain, convergence_radius, finite_base_chain, limit_transfer
from .marked_space import (
    DEFAULT_VERTEX_CAP,
    DEFAULT_WORD_CAP,
    MarkedGroup,
    ball,
    ball_adjacency_text,
    ball_digest,
    marked_distance,
    valuation,
)
from .slnp_lab import (
    Presentation,
    amalgam_presentation,
    hnn_presentation,
    order_sweep,
    presentation_deficiency,
    test_g_vanishing,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass
class ExperimentConfig:
    command: str
    params: dict
    seed: int = 0
    out: str | None = None
    fmt: str = "json"
    cap_vertices: int = DEFAULT_VERTEX_CAP
    cap_words: int = DEFAULT_WORD_CAP


@dataclass
class Outcome:
    result: dict
    rows: list = field(default_factory=list)  # CSV rows, header first
    violation: bool = False


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- marked groups by name ------------------------------------------------------


def marked_from_spec(text: str) -> MarkedGroup:
    """``Z``, ``Z/m`` (or ``Cm``), ``Fk``, ``sanov``, ``Sn``, ``Dn``."""
    t = text.strip()
    if t == "Z":
        return MarkedGroup(IntegerGroup(), (1,), ("t",))
    if t.startswith("Z/") or (t[:1] == "C" and t[1:].isdigit()):
        m = int(t[2:] if t.startswith("Z/") else t[1:])
        return MarkedGroup(CyclicGroup(m), (1 % m,), ("t",))
    if t[:1] == "F" and t[1:].isdigit():
        free = FreeGroup(int(t[1:]))
        return MarkedGroup(free, free.generators())
    if t.lower() == "sanov":
        return MarkedGroup(IntegerMatrixGroup(2), SANOV_GENERATORS)
    if t[:1] == "D" and t[1:].isdigit():
        t = f"dihedral:{t[1:]}"
    group = group_from_name(t)
    if not isinstance(group, PermutationGroup):
        raise UsageError(f"group {t!r} has no default marking")
    return MarkedGroup(group, group.gens)


# -- subcommands ------------------------------------------------------------------


def cmd_ball(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    mg = marked_from_spec(p["group"])
    b = ball(mg, p["radius"], cfg.cap_vertices)
    rows = [("source", "label", "target")] + [tuple(line.split()) for line in ball_adjacency_text(b).splitlines()]
    result = {
        "group": p["group"],
        "radius": b.radius,
        "vertices": len(b),
        "edges": len(b.edges),
        "sha256": ball_digest(b),
        "sphere_sizes": [b.norms.count(k) for k in range(b.radius + 1)],
    }
    return Outcome(result, rows)


def cmd_distance(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    if p.get("family") == "z-vs-zmod":
        left, right = marked_from_spec("Z"), marked_from_spec(f"Z/{p['m']}")
        names = ("Z", f"Z/{p['m']}")
    else:
        if not (p.get("left") and p.get("right")):
            raise UsageError("distance needs --family z-vs-zmod or --left and --right")
        left, right = marked_from_spec(p["left"]), marked_from_spec(p["right"])
        names = (p["left"], p["right"])
    v = valuation(left, right, p["cap"], cfg.cap_words)
    lo, hi = marked_distance(left, right, p["cap"]) if v.exact else (None, None)
    result = {
        "left": names[0],
        "right": names[1],
        "cap": p["cap"],
        "v": v.value,
        "exact": v.exact,
        "d": str(lo) if v.exact else f"<= 1/{2 ** p['cap']}",
    }
    return Outcome(result, [("left", "right", "v", "exact", "d"), (names[0], names[1], v.value, v.exact, result["d"])])


def cmd_converge(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    chain = congruence_chain(p["family"], p["modulus"], p["length"])
    radii = [convergence_radius(chain, r, cfg.cap_words) for r in range(p["radius_max"] + 1)]
    vals = [valuation(chain.base, chain.stage(r), p["valuation_cap"], cfg.cap_words) for r in chain.indices()]
    result = {
        "family": p["family"],
        "moduli": chain.moduli,
        "nesting_ok": chain.check_nesting(),
        "convergence_radius": radii,
        "valuation": [str(v) for v in vals],
    }
    rows = [("R", "stage")] + [(r, "" if s is None else s) for r, s in enumerate(radii)]
    return Outcome(result, rows, violation=not result["nesting_ok"])


def cmd_transfer(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    ring = ring_from_name(p["ring"])
    if p["random"]:
        mg = marked_from_spec(p["base"])
        if not mg.group.is_finite:
            raise UsageError("--random needs a finite base")
        chain = finite_base_chain(mg)
        rng = random.Random(cfg.seed)
        certs = []
        for _ in range(p["random"]):
            x, y = random_unit_pair(ring, mg.group, rng)
            certs.append(limit_transfer(x, y, chain, p["norm_cap"], cfg.cap_words))
        false_certs = sum(c.verdict == "confirmed" and c.direct_verdict != "confirmed" for c in certs)
        result = {
            "base": p["base"],
            "ring": p["ring"],
            "pairs": len(certs),
            "confirmed": sum(c.verdict == "confirmed" for c in certs),
            "inconsistent": sum(not c.consistent for c in certs),
            "false_certificates": false_certs,
            "max_m": max(c.m for c in certs),
        }
        return Outcome(result, [tuple(result)] + [tuple(result.values())], violation=result["inconsistent"] > 0)
    if p["base"] in ("Z", "sanov"):
        chain = congruence_chain(p["base"], p["modulus"], p["length"])
        mg = MarkedGroup(chain.base.group, chain.base.marking, ("t",) if p["base"] == "Z" else None)
    else:
        mg = marked_from_spec(p["base"])
        chain = finite_base_chain(mg)
    x, y = parse_element(p["x"], mg, ring), parse_element(p["y"], mg, ring)
    cert = limit_transfer(x, y, chain, p["norm_cap"], cfg.cap_words)
    result = {
        "base": p["base"],
        "ring": p["ring"],
        "x": format_element(x, mg),
        "y": format_element(y, mg),
        **cert.to_dict(timings=False),
    }
    keys = ("m", "radius", "stage", "verdict", "direct_verdict")
    return Outcome(result, [keys, tuple(result[k] for k in keys)], violation=not cert.consistent)


def cmd_df_exhaustive(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    reports = []
    for spec in p["cases"]:
        if spec.lower() in ("f4*c2", "frobenius"):
            system = frobenius_system()
            validate_cocycle(system)
            reports.append(exhaustive_direct_finiteness_crossed(system, p["element_cap"]))
        else:
            ring_name, group_name = spec.split("@")
            reports.append(exhaustive_direct_finiteness(ring_from_name(ring_name), group_from_name(group_name), p["element_cap"]))
    cases = [r.to_dict(timings=False) for r in reports]
    for c in cases:
        c["violations"] = len(c["violations"])
    rows = [("ring", "group", "elements", "units", "violations")] + [
        (c["ring"], c["group"], c["elements"], c["units"], c["violations"]) for c in cases
    ]
    return Outcome({"cases": cases}, rows, violation=any(c["violations"] for c in cases))


def _stock_system(name: str):
    if name == "trivial":
        return trivial_system(ring_from_name("Z/2"), group_from_name("S3"))
    if name == "twisted":
        return twisted_sign_system()
    if name == "frobenius":
        return frobenius_system()
    if name.startswith("defect:"):
        defects = planted_defects()
        if name[7:] not in defects:
            raise UsageError(f"unknown defect {name[7:]!r}; choose from {sorted(defects)}")
        return defects[name[7:]]
    raise UsageError(f"unknown stock system {name!r}")


def cmd_crossed_validate(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    if p.get("system"):
        system = load_system(Path(p["system"]).read_text())
    else:
        system = _stock_system(p["stock"])
    report = validate_cocycle(system)
    result = {
        "system": system.name,
        "valid": report.valid,
        "kind": classify(system).value if report.valid else None,
        "violation_kinds": sorted(report.kinds()),
        "violations": len(report.violations),
    }
    rows = [("system", "valid", "kind", "violation_kinds"), (system.name, report.valid, result["kind"] or "", ";".join(result["violation_kinds"]))]
    return Outcome(result, rows, violation=not report.valid)


def cmd_crossed_decompose(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    ring, group = ring_from_name(p["ring"]), group_from_name(p["group"])
    if p["normal"] != "alternating":
        raise UsageError("only --normal alternating is supported")
    system = trivial_system(ring, group)
    validate_cocycle(system)
    dec = decompose(system, alternating_subgroup(group))
    elems = list(system.elements())
    if len(elems) ** 2 > p["pair_cap"]:
        raise ResourceLimit(f"{len(elems) ** 2} products exceed cap {p['pair_cap']}")
    images = [dec.forward(u) for u in elems]
    bad = 0
    for u, fu in zip(elems, images):
        for v, fv in zip(elems, images):
            if dec.forward(cp_mul(u, v)) != cp_mul(fu, fv):
                bad += 1
    roundtrip = all(dec.backward(fu) == u for u, fu in zip(elems, images))
    result = {
        "system": system.name,
        "normal_order": len(dec.normal.elements()),
        "quotient_order": len(dec.quotient.elements()),
        "outer_valid": dec.system.validated,
        "outer_kind": classify(dec.system).value,
        "products_checked": len(elems) ** 2,
        "products_mismatched": bad,
        "roundtrip": roundtrip,
    }
    rows = [tuple(result), tuple(result.values())]
    return Outcome(result, rows, violation=bool(bad) or not roundtrip or not dec.system.validated)


def _q_range(p: dict) -> range:
    return range(p["q_min"], p["q_max"])


def cmd_slnp_orders(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    reports = order_sweep(p["n"], p["p"], _q_range(p))
    rows = [("q", "o_a", "o_x", "equal", "gcd")] + [
        (r.q, r.o_a, r.o_x, str(r.subgroup_equal).lower(), r.gcd_ox_p) for r in reports
    ]
    result = {"n": p["n"], "p": p["p"], "reports": [r.to_dict() for r in reports]}
    return Outcome(result, rows, violation=not all(r.holds and r.o_a == r.o_x for r in reports))


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def cmd_slnp_vanish(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    reports = [
        test_g_vanishing(p["n"], p["p"], q, p["samples"], r=p["r"], seed=cfg.seed)
        for q in _q_range(p)
        if _is_prime(q) and q != p["p"]
    ]
    rows = [("q", "twists", "amalgam_agreement", "counterexamples")] + [
        (r.q, r.twists, str(r.amalgam_agreement).lower(), len(r.counterexamples)) for r in reports
    ]
    result = {"n": p["n"], "p": p["p"], "r": p["r"], "reports": [r.to_dict() for r in reports]}
    return Outcome(result, rows, violation=not all(r.holds for r in reports))


def cmd_presentations(cfg: ExperimentConfig) -> Outcome:
    p = cfg.params
    if p.get("file"):
        pres = Presentation.from_text(Path(p["file"]).read_text())
    else:
        pres = Presentation(("a", "b"))
    base = presentation_deficiency(pres)
    table, ok = [], True
    for r in range(2, p["r_max"] + 1):
        da = presentation_deficiency(amalgam_presentation(pres, r))
        dh = presentation_deficiency(hnn_presentation(pres, r))
        ok &= da == 2 * base - r and dh == base + 1 - r
        table.append({"r": r, "amalgam": da, "hnn": dh})
    distinct = len({row["amalgam"] for row in table}) == len(table)
    result = {
        "generators": list(pres.generators),
        "relators": len(pres.relators),
        "deficiency": base,
        "table": table,
        "identities_hold": ok,
        "amalgam_distinct": distinct,
    }
    if p.get("emit"):
        build = amalgam_presentation if p["emit"] == "amalgam" else hnn_presentation
        result["emitted"] = build(pres, p["emit_r"]).to_text()
    rows = [("r", "amalgam", "hnn")] + [(row["r"], row["amalgam"], row["hnn"]) for row in table]
    return Outcome(result, rows, violation=not (ok and distinct))


COMMANDS = {
    "ball": cmd_ball,
    "distance": cmd_distance,
    "converge": cmd_converge,
    "transfer": cmd_transfer,
    "df-exhaustive": cmd_df_exhaustive,
    "crossed-validate": cmd_crossed_validate,
    "crossed-decompose": cmd_crossed_decompose,
    "slnp-orders": cmd_slnp_orders,
    "slnp-vanish": cmd_slnp_vanish,
    "presentations": cmd_presentations,
}

DEFAULT_FORMAT = {"slnp-orders": "csv"}
COMMON = ("json", "csv", "cap_vertices", "cap_words", "seed", "config", "out", "command")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="write a JSON report")
    fmt.add_argument("--csv", action="store_true", help="write CSV rows")
    common.add_argument("--cap-vertices", type=int, default=DEFAULT_VERTEX_CAP)
    common.add_argument("--cap-words", type=int, default=DEFAULT_WORD_CAP)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--config", help="JSON file whose keys mirror the flags")
    common.add_argument("--out", help="report path (stdout if omitted)")

    parser = _Parser(prog="marklab", description="Marked groups, group rings and SL_n(Z[1/p]) experiments.")
    parser.add_argument("--version", action="version", version=f"marklab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("ball", parents=[common], help="Cayley ball summary and adjacency")
    s.add_argument("--group", default="F2")
    s.add_argument("--radius", type=int, default=2)

    s = sub.add_parser("distance", parents=[common], help="valuation and distance of two marked groups")
    s.add_argument("--family", choices=["z-vs-zmod"])
    s.add_argument("--m", type=int, default=7)
    s.add_argument("--left")
    s.add_argument("--right")
    s.add_argument("--cap", type=int, default=10)

    s = sub.add_parser("converge", parents=[common], help="convergence radii along a congruence chain")
    s.add_argument("--family", choices=["Z", "sanov"], default="Z")
    s.add_argument("--modulus", type=int, default=2)
    s.add_argument("--length", type=int, default=8)
    s.add_argument("--radius-max", type=int, default=6)
    s.add_argument("--valuation-cap", type=int, default=8)

    s = sub.add_parser("transfer", parents=[common], help="certify yx = 1 from a finite quotient")
    s.add_argument("--base", default="Z", help="Z, sanov, or a finite group such as C5 or S3")
    s.add_argument("--ring", default="Z")
    s.add_argument("--x", default="t")
    s.add_argument("--y", default="t'")
    s.add_argument("--modulus", type=int, default=3)
    s.add_argument("--length", type=int, default=4)
    s.add_argument("--norm-cap", type=int, default=64)
    s.add_argument("--random", type=int, default=0, help="check this many random unit pairs instead")

    s = sub.add_parser("df-exhaustive", parents=[common], help="exhaustive direct finiteness scan")
    s.add_argument(
        "--cases",
        nargs="+",
        default=["Z/2@C2", "Z/2@C3", "Z/3@C3", "Z/2@S3", "Z/2@C2xC2", "frobenius"],
        help="RING@GROUP items or 'frobenius'",
    )
    s.add_argument("--element-cap", type=int, default=2**20)

    s = sub.add_parser("crossed-validate", parents=[common], help="validate a crossed-product system")
    s.add_argument("--system", help="JSON system description")
    s.add_argument("--stock", default="frobenius", help="trivial, twisted, frobenius or defect:<kind>")

    s = sub.add_parser("crossed-decompose", parents=[common], help="check R*G = (R*N)*(G/N) on all products")
    s.add_argument("--ring", default="Z/2")
    s.add_argument("--group", default="S3")
    s.add_argument("--normal", default="alternating")
    s.add_argument("--pair-cap", type=int, default=10**5)

    for name, helptext in (("slnp-orders", "order comparison sweep over q"), ("slnp-vanish", "commutator vanishing over prime q")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--n", type=int, default=3)
        s.add_argument("--p", type=int, default=3)
        s.add_argument("--q-min", type=int, default=2)
        s.add_argument("--q-max", type=int, default=51, help="exclusive upper bound")
        if name == "slnp-vanish":
            s.add_argument("--samples", type=int, default=10)
            s.add_argument("--r", type=int, default=2)

    s = sub.add_parser("presentations", parents=[common], help="amalgam / HNN deficiency table")
    s.add_argument("--file", help="presentation file (default <a, b | >)")
    s.add_argument("--r-max", type=int, default=6)
    s.add_argument("--emit", choices=["amalgam", "hnn"])
    s.add_argument("--emit-r", type=int, default=2)
    return parser


def parse_config(argv: list[str]) -> ExperimentConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required")
    if args.config:
        try:
            overrides = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in overrides.items()})
        args = parser.parse_args(argv)  # explicit flags still win over the file
    if args.cap_vertices <= 0 or args.cap_words <= 0:
        raise UsageError("caps must be positive")
    fmt = "csv" if args.csv else "json" if args.json else DEFAULT_FORMAT.get(args.command, "json")
    params = {k: v for k, v in vars(args).items() if k not in COMMON}
    return ExperimentConfig(args.command, params, args.seed, args.out, fmt, args.cap_vertices, args.cap_words)


def render(cfg: ExperimentConfig, outcome: Outcome) -> str:
    if cfg.fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(outcome.rows)
        return buf.getvalue()
    report = {
        "command": cfg.command,
        "config": {**cfg.params, "cap_vertices": cfg.cap_vertices, "cap_words": cfg.cap_words, "format": cfg.fmt},
        "seed": cfg.seed,
        "version": __version__,
        "violation": outcome.violation,
        "result": outcome.result,
    }
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"marklab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        outcome = COMMANDS[cfg.command](cfg)
    except ResourceLimit as exc:
        print(f"marklab: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, MarkLabError, ValueError, KeyError) as exc:
        print(f"marklab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    text = render(cfg, outcome)
    if cfg.out:
        out = Path(cfg.out)
        out.write_text(text)
        sidecar = out.with_name(out.name + ".timings.json")
        sidecar.write_text(json.dumps({"command": cfg.command, "seconds": elapsed}, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if outcome.violation else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
