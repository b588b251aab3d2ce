"""Command-line front end.

Exit codes: 0 success (and, for verdict-producing commands, a pass),
1 semantic failure (feasibility fail, classification discrepancy, oracle
disagreement), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from mpmath import mp

from . import bound, oracle, search
from .core import ArrayFormatError, format_array, parse_array
from .feasibility import full_report
from .precision import workdps
from .spectral import as_mpf, spectrum
from .search import GRAPH_NAMES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _nstr(x, digits: int = 10) -> str:
    with workdps():
        return mp.nstr(as_mpf(x), digits)


# ---------------------------------------------------------------- check

def cmd_check(args) -> int:
    try:
        arr = parse_array(args.array)
    except ArrayFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = full_report(arr, theta_ratio=args.theta_ratio)
    if args.json:
        print(json.dumps(rep.to_json_dict()))
    else:
        print(f"array {format_array(arr)}  D={arr.D} k={arr.k} v={arr.v}")
        for e in rep.checks:
            print(f"  {e.name:32s} {e.verdict}")
        print(f"overall: {rep.overall}")
    return EXIT_OK if rep.overall == "pass" else EXIT_FAIL


# ------------------------------------------------------------ enumerate

def _spec_from_args(args) -> search.SearchSpec:
    if args.spec:
        with open(args.spec) as fh:
            return search.SearchSpec.from_json_dict(json.load(fh))
    if args.diameter is None:
        raise search.SearchSpecError("need --spec FILE or --diameter D")
    if args.k_min is None and args.k_max is None and args.a_pattern is None \
            and args.theta_ratio is None and args.c2 is None:
        return search.default_spec(args.diameter)
    D = args.diameter
    cap = search.valency_cap(D).k_max if D in (4, 5) else None
    return search.SearchSpec(
        D=D,
        k_min=args.k_min if args.k_min is not None else 5,
        k_max=args.k_max if args.k_max is not None else (cap or 5),
        a_pattern=args.a_pattern or "0" * (D - 1) + "+",
        c2_set=tuple(int(x) for x in args.c2.split(",")) if args.c2 else (1, 2),
        theta_ratio=args.theta_ratio if args.theta_ratio is not None
        else Fraction(-(D - 1), D),
    )


def cmd_enumerate(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (search.SearchSpecError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = search.enumerate_arrays(spec, jobs=args.jobs)
    rows = []
    for arr in result.survivors:
        sp = spectrum(arr)
        rows.append({
            "array": format_array(arr), "k": arr.k, "D": arr.D,
            "v": int(arr.v), "odd_girth": arr.g if arr.g else "bipartite",
            "theta_min": _nstr(sp.theta_min, 12),
        })
    if args.json:
        print(json.dumps({
            "spec": spec.to_json_dict(),
            "survivors": rows,
            "stats": result.stats.to_json_dict(),
        }))
    else:
        for row in rows:
            print(f"survivor {row['array']}")
        print(f"generated {result.stats.generated}")
        for name, n in sorted(result.stats.killed.items()):
            print(f"  killed by {name:28s} {n}")
        print(f"survivors {result.stats.survivors}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["array", "k", "D", "v",
                                               "odd_girth", "theta_min"])
            w.writeheader()
            w.writerows(rows)
    return EXIT_OK


# ------------------------------------------------------------- theorem2

def cmd_theorem2(args) -> int:
    if args.diameter not in (4, 5):
        print("error: --diameter must be 4 or 5", file=sys.stderr)
        return EXIT_USAGE
    result = search.classify_diameter(args.diameter, jobs=args.jobs,
                                      disable_checks=tuple(args.disable_check or ()))
    if args.json:
        print(json.dumps({
            "D": result.D,
            "stages": [{"name": s.name, "lines": list(s.lines),
                        "arrays": [format_array(a) for a in s.arrays]}
                       for s in result.stages],
            "arrays": [format_array(a) for a in result.arrays],
            "discrepancies": list(result.discrepancies),
        }))
    else:
        D = result.D
        print(f"classification for diameter {D}, theta_min <= -{D - 1}/{D} k")
        for s in result.stages:
            print(f"[stage] {s.name}")
            for line in s.lines:
                print(f"  {line}")
        print(f"result: {len(result.arrays)} arrays")
        for arr in result.arrays:
            text = format_array(arr)
            name = GRAPH_NAMES.get(text)
            print(f"  {text}  ({name})" if name else f"  {text}")
        for d in result.discrepancies:
            print(f"DISCREPANCY: {d}")
    return EXIT_FAIL if result.discrepancies else EXIT_OK


# ----------------------------------------------------------------- bound

def cmd_bound(args) -> int:
    g = args.girth
    if g < 5 or g % 2 == 0:
        print("error: --girth must be odd and >= 5", file=sys.stderr)
        return EXIT_USAGE
    if args.mode not in bound.MODES:
        print(f"error: --mode must be one of {', '.join(bound.MODES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.table:
            lo, _, hi = args.table.partition("..")
            rows = bound.bound_table(int(lo), int(hi), args.mode)
            print("g,zeta_star,epsilon1,theta_over_k")
            for gg, z, e, th in rows:
                print(f"{gg},{_nstr(z)},{_nstr(e)},{_nstr(th)}")
            return EXIT_OK
        params = bound.epsilon1(g, args.mode, zeta=args.zeta)
    except bound.BoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"odd girth g = {g} (t = {params.t}), mode = {params.mode}")
    star = " (zeta*)" if args.zeta is None else ""
    print(f"zeta = {_nstr(params.zeta)}{star}")
    print(f"M1 = {_nstr(params.M1)}, M2 = {_nstr(params.M2)}")
    if params.epsilon1 is None:
        print("no root in (-1, 0): no information at this zeta")
        return EXIT_OK
    print(f"epsilon1 = {_nstr(params.epsilon1)}")
    tb = params.theta_over_k
    print(f"theta/k >= {_nstr(tb)}  (conservative 2dp: {bound.conservative_2dp(tb)})")
    print(f"polygon upper bound = {_nstr(bound.polygon_epsilon_upper(g))}")
    if args.zeta is not None and args.zeta > 0:
        print(f"diameter bound = {bound.diameter_bound(params.t, args.zeta)}")
    else:
        with workdps():
            z = as_mpf(params.zeta)
            if z > 0:
                print(f"diameter bound = {int(mp.ceil(4 * params.t / (z * z)))}")
    print(f"note: {bound.EPSILON_CAVEAT}")
    return EXIT_OK


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    try:
        g = oracle.build(args.graph)
    except oracle.OracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.export:
        g.write_edge_list(args.export)
    print(f"graph {g.name}: {g.n} vertices, {len(g.edges)} edges")
    arr, witness = oracle.verify_distance_regular(g)
    if arr is None:
        print(f"not distance-regular: witness (x, y, i) = {witness}")
        return EXIT_FAIL
    print(f"intersection array (BFS): {format_array(arr)}")
    og = oracle.odd_girth_bruteforce(g)
    print(f"odd girth (BFS): {og}")
    vals, mults = oracle.spectrum_bruteforce(g)
    print("spectrum (dense): " + ", ".join(
        f"{v:.6f}^{m}" for v, m in zip(vals, mults)))

    sp = spectrum(arr)
    agree_spec = len(vals) == len(sp.thetas) and all(
        abs(float(as_mpf(t)) - v) < 1e-7 for t, v in zip(sp.thetas, vals))
    agree_mult = tuple(mults) == sp.mults
    og_arr = arr.g if arr.g is not None else oracle.BIPARTITE
    agree_og = og == og_arr
    catalog = dict(oracle.CATALOG)
    agree_arr = True
    print("agreement with array-derived values:")
    if g.name in catalog:
        agree_arr = format_array(arr) == catalog[g.name]
        print(f"  intersection array vs catalog: {'agree' if agree_arr else 'DISAGREE'}")
    print(f"  spectrum: {'agree' if agree_spec else 'DISAGREE'}")
    print(f"  multiplicities: {'agree' if agree_mult else 'DISAGREE'}")
    print(f"  odd girth: {'agree' if agree_og else 'DISAGREE'}")
    all_ok = agree_arr and agree_spec and agree_mult and agree_og
    return EXIT_OK if all_ok else EXIT_FAIL


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="drgf",
        description="Distance-regular graph intersection-array toolkit: "
                    "feasibility checks, spectral odd-girth bounds, "
                    "classification searches, and brute-force graph oracles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the feasibility battery on one array")
    p.add_argument("array", help="intersection array, e.g. '{9,8,7,6;1,2,3,4}'")
    p.add_argument("--json", action="store_true")
    p.add_argument("--theta-ratio", type=_fraction, default=None,
                   help="also require theta_min <= RATIO * k (e.g. -3/4)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="exhaust a search space of arrays")
    p.add_argument("--spec", help="JSON search-spec file")
    p.add_argument("--diameter", "-d", type=int)
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--a-pattern", help="one char per a_1..a_D: 0 zero, + nonzero, * free")
    p.add_argument("--c2", help="comma list of allowed c_2 values (default 1,2)")
    p.add_argument("--theta-ratio", type=_fraction, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", help="write survivors to a CSV file")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("theorem2", help="reproduce the diameter-4/5 classification")
    p.add_argument("--diameter", "-d", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--disable-check", action="append", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("bound", help="odd-girth smallest-eigenvalue bound")
    p.add_argument("--girth", "-g", type=int, required=True)
    p.add_argument("--zeta", type=_fraction, default=None,
                   help="branch parameter in [0, 1/2]; default zeta*")
    p.add_argument("--mode", default=bound.MODE_GENERAL,
                   help="general or sharp-g5")
    p.add_argument("--table", metavar="GMIN..GMAX",
                   help="emit a CSV table over a girth range")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="brute-force check a named witness graph")
    p.add_argument("graph", help="cycle:N, odd_graph:M, folded_cube:N, coxeter")
    p.add_argument("--export", help="write the edge list to a file")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
