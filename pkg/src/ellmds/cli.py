"""Command-line interface: ``ellmds bound | curve | place | code``.

Exit status: 0 on success (and MDS verdicts), 2 on a NotMDS verdict, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .catalog import EXAMPLES
from .codes import generator_matrix, mds_combinatorial, mds_matrix
from .constructions import audit_code, build_max_code, mec_bound
from .curves import Curve, default_search, enumerate_points, find_curve, hasse_ok
from .errors import EllMDSError
from .fields import FiniteField, make_field
from .groups import group_table, index2_subgroups
from .places import find_degree3_avoid, find_degree3_trace
from .serialize import (
    dumps,
    matrix_header,
    matrix_to_csv,
    parse_cell,
    place_to_json,
    point_to_json,
    spec_from_json,
    spec_to_json,
    verdict_to_json,
)

log = logging.getLogger("ellmds")


def _field(args) -> FiniteField:
    return make_field(args.p, args.a, args.modulus)


def _curve(args) -> Curve:
    F = _field(args)
    if args.coeffs:
        parts = args.coeffs.split(",")
        if len(parts) != 5:
            raise ValueError("--coeffs needs five comma-separated elements a1,a2,a3,a4,a6")
        return Curve(F, *(parse_cell(F, c) for c in parts))
    N = args.target_n
    if getattr(args, "strategy", None):
        return find_curve(F, N, args.strategy, seed=args.seed)
    return default_search(F, N)[0]


def _emit(obj, out: str | None = None):
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def cmd_bound(args) -> int:
    _emit(mec_bound(args.q, args.k, args.restricted).to_json())
    return 0


def cmd_curve_info(args) -> int:
    E = _curve(args)
    _, N = enumerate_points(E)
    G = group_table(E)
    _emit({
        "curve": E.to_json(),
        "N": N,
        "hasse_ok": hasse_ok(E.field.q, N),
        "invariant_factors": [G.d, G.e],
        "generators": {"g1": point_to_json(G.g1), "g2": point_to_json(G.g2)},
        "index2_subgroups": len(index2_subgroups(G)),
    }, args.output)
    return 0


def cmd_curve_search(args) -> int:
    F = _field(args)
    E = find_curve(F, args.target_n, args.strategy, seed=args.seed)
    _emit({"curve": E.to_json(), "N": E.order(), "strategy": args.strategy, "seed": args.seed},
          args.output)
    return 0


def cmd_place_deg3(args) -> int:
    E = _curve(args)
    if args.method == "avoid":
        R, b = find_degree3_avoid(E)
    else:
        R = find_degree3_trace(E, seed=args.seed)
    _emit({"curve": E.to_json(), "method": args.method, "seed": args.seed,
           "place": place_to_json(R)}, args.output)
    return 0


def cmd_code_construct(args) -> int:
    if args.example:
        spec = EXAMPLES[args.example]().spec
    else:
        if args.p is None or args.a is None or args.k is None:
            raise ValueError("code construct needs --p, --a and --k (or --example)")
        log.info("building with seed %d", args.seed)
        spec = build_max_code(args.p, args.a, args.k, args.restricted, seed=args.seed)
    doc = spec_to_json(spec)
    M = generator_matrix(spec)
    out = Path(args.output) if args.output else None
    if out is not None:
        out.write_text(dumps(doc))
        out.with_suffix(".csv").write_text(matrix_to_csv(M))
        out.with_suffix(".header.json").write_text(dumps(matrix_header(M)))
    if args.format == "csv":
        sys.stdout.write(matrix_to_csv(M))
    else:
        sys.stdout.write(dumps({"n": spec.n, "k": spec.k, "provenance": doc["provenance"],
                                "output": str(out) if out else None}))
    return 0


def _load_spec(path: str):
    return spec_from_json(json.loads(Path(path).read_text()))


def cmd_code_verify(args) -> int:
    spec = _load_spec(args.input)
    mode = args.mode
    if mode == "combinatorial":
        v = mds_combinatorial(spec, group_table(spec.curve))
    else:
        M = generator_matrix(spec)
        if mode == "minors":
            v = mds_matrix(M, "exhaustive_minors", threads=args.threads)
        elif mode.startswith("sampled:"):
            v = mds_matrix(M, "sampled_minors", count=int(mode.split(":", 1)[1]), seed=args.seed)
        elif mode == "distance":
            v = mds_matrix(M, "exhaustive_distance")
        else:
            raise ValueError(f"unknown mode {mode!r}")
    _emit({"n": spec.n, "k": spec.k, **verdict_to_json(v, spec)}, args.output)
    return 0 if v.mds else 2


def cmd_code_audit(args) -> int:
    spec = _load_spec(args.input)
    _emit(audit_code(spec, group_table(spec.curve)).to_json(), args.output)
    return 0


def _field_args(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--p", type=int, required=required, help="characteristic")
    p.add_argument("--a", type=int, required=required, help="extension degree")
    p.add_argument("--modulus", help="monic irreducible, e.g. 'x^2+16x+3' or '3,16,1'")


def _curve_args(p: argparse.ArgumentParser):
    _field_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--coeffs", help="a1,a2,a3,a4,a6 as base-p digit strings joined by ':'")
    g.add_argument("--target-n", type=int, help="search for a curve with this many points")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellmds", description="MDS elliptic codes")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="maximal length from the bound table")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--restricted", action="store_true", help="Supp(G) of rational points only")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("curve").add_subparsers(dest="action", required=True)
    ci = c.add_parser("info")
    _curve_args(ci)
    ci.add_argument("--strategy", choices=["family", "exhaustive", "random"])
    ci.add_argument("--seed", type=int, default=0)
    ci.add_argument("-o", "--output")
    ci.set_defaults(func=cmd_curve_info)
    cs = c.add_parser("search")
    _field_args(cs)
    cs.add_argument("--target-n", type=int, required=True)
    cs.add_argument("--strategy", choices=["family", "exhaustive", "random"], default="exhaustive")
    cs.add_argument("--seed", type=int, default=0)
    cs.add_argument("-o", "--output")
    cs.set_defaults(func=cmd_curve_search)

    pl = sub.add_parser("place").add_subparsers(dest="action", required=True)
    pd = pl.add_parser("deg3")
    _curve_args(pd)
    pd.add_argument("--method", choices=["trace", "avoid"], default="avoid")
    pd.add_argument("--strategy", choices=["family", "exhaustive", "random"])
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("-o", "--output")
    pd.set_defaults(func=cmd_place_deg3)

    co = sub.add_parser("code").add_subparsers(dest="action", required=True)
    cc = co.add_parser("construct")
    _field_args(cc, required=False)
    cc.add_argument("--k", type=int)
    cc.add_argument("--restricted", action="store_true")
    cc.add_argument("--seed", type=int, default=0)
    cc.add_argument("--example", choices=sorted(EXAMPLES), help="rebuild a worked example instead")
    cc.add_argument("--format", choices=["json", "csv"], default="json")
    cc.add_argument("-o", "--output", help="CodeSpec path; matrix goes next to it as .csv")
    cc.set_defaults(func=cmd_code_construct)
    cv = co.add_parser("verify")
    cv.add_argument("-i", "--input", required=True)
    cv.add_argument("--mode", default="combinatorial",
                    help="combinatorial | minors | sampled:COUNT | distance")
    cv.add_argument("--seed", type=int, default=0)
    cv.add_argument("--threads", type=int, default=1)
    cv.add_argument("-o", "--output")
    cv.set_defaults(func=cmd_code_verify)
    ca = co.add_parser("audit")
    ca.add_argument("-i", "--input", required=True)
    ca.add_argument("-o", "--output")
    ca.set_defaults(func=cmd_code_audit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (EllMDSError, ValueError, OSError) as exc:
        print(f"ellmds: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
