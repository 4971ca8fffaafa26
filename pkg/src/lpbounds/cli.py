"""Command-line interface: bound queries, parameter tables, code analysis, reference data."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import hamming_bounds as hb
from . import spherical_bounds as sb
from .code_analysis import (
    attainment_report, covering_radius_bounds, covering_radius_exact, distance_distribution,
    energy_from_distribution, read_code,
)
from .errors import CodeFormatError, InvariantError, LPBoundsError, ResourceLimitError, check_work
from .lp_engine import code_lp, design_lp, energy_lp
from .numeric import is_exact, mp, to_mp
from .ortho_poly import HammingSpace
from .potentials import parse_potential

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def fmt(x, decimal: int | None = None) -> str:
    """p/q for rationals (or a decimal with `decimal` digits); 15 significant digits otherwise."""
    if x is None:
        return "NA"
    if isinstance(x, str):
        return x
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if is_exact(x):
        x = Fraction(x)
        if decimal is None:
            return str(x)
        return mp.nstr(to_mp(x), decimal, strip_zeros=False) if x.denominator != 1 else str(x)
    return mp.nstr(to_mp(x), decimal or 15)


def _json_value(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float):
        return x
    return mp.nstr(to_mp(x), 20)


def _space(args) -> HammingSpace:
    try:
        return HammingSpace(args.n, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# code bounds


CODE_METHODS = ("singleton", "hamming", "levenshtein", "lp")


def code_bound_value(space: HammingSpace, d: int, method: str):
    n = space.n
    if method == "singleton":
        return Fraction(space.q) ** (n - d + 1)
    if method == "hamming":
        return hb.hamming_upper(space, d)
    if method in ("levenshtein", "plotkin"):
        if d > n:
            return None
        return hb.levenshtein_value(space, d)
    if method == "lp":
        if d > n:
            return Fraction(1)  # no admissible distance: only the zero word
        check_work((n + 1) ** 4, 10**8, f"LP for n={n}")
        return code_lp(space, d).value
    raise UsageError(f"unknown method {method!r}")


def cmd_code_bound(args, out) -> int:
    space = _space(args)
    if not 1 <= args.d <= space.n:
        raise UsageError(f"-d must lie in 1..{space.n}")
    methods = CODE_METHODS if args.method == "all" else (args.method,)
    if len(methods) == 1:
        m = methods[0]
        if m == "lp":
            rep = code_lp(space, args.d)
            out.write(fmt(rep.value, args.decimal) + "\n")
            if args.verbose and rep.certificate is not None:
                out.write("# certificate coefficients f_0..f_n: "
                          + " ".join(str(c) for c in rep.certificate.coeffs) + "\n")
                out.write("# optimal distance distribution: "
                          + " ".join(str(b) for b in rep.extra["distribution"]) + "\n")
        else:
            out.write(fmt(code_bound_value(space, args.d, m), args.decimal) + "\n")
        return EXIT_OK
    for m in methods:
        out.write(f"{m:<12} {fmt(code_bound_value(space, args.d, m), args.decimal)}\n")
    return EXIT_OK


def cmd_design_bound(args, out) -> int:
    space = _space(args)
    if not 1 <= args.t <= space.n:
        raise UsageError(f"-t must lie in 1..{space.n}")
    values = {
        "rao": lambda: hb.rao_lower(space, args.t + 1),
        "levenshtein": lambda: Fraction(space.q**space.n) / hb.levenshtein_value(space, args.t + 1),
        "lp": lambda: design_lp(space, args.t).value,
    }
    methods = list(values) if args.method == "all" else [args.method]
    if len(methods) == 1:
        out.write(fmt(values[methods[0]](), args.decimal) + "\n")
        return EXIT_OK
    for m in methods:
        out.write(f"{m:<12} {fmt(values[m](), args.decimal)}\n")
    return EXIT_OK


def cmd_energy_bound(args, out) -> int:
    space = _space(args)
    try:
        h = parse_potential(args.h, "hamming")
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None
    values = {
        "lp": lambda: energy_lp(space, args.M, h).value,
        "ulb": lambda: hb.ulb_energy(space, args.M, h).value,
    }
    methods = list(values) if args.method == "all" else [args.method]
    if len(methods) == 1:
        out.write(fmt(values[methods[0]](), args.decimal) + "\n")
        return EXIT_OK
    for m in methods:
        out.write(f"{m:<12} {fmt(values[m](), args.decimal)}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sphere


def cmd_sphere(args, out) -> int:
    n = args.dim
    if n < 2:
        raise UsageError("--dim must be at least 2")
    if args.points:
        cfg = sb.read_points(args.points)
        info = sb.sphere_attainment(cfg)
        for key, val in info.items():
            out.write(f"{key:<20} {fmt(val, args.decimal) if not isinstance(val, bool) else str(val).lower()}\n")
        if args.h:
            h = parse_potential(args.h, "sphere", cfg.n)
            out.write(f"{'energy':<20} {fmt(sb.energy_sphere(cfg, h), args.decimal)}\n")
        return EXIT_OK
    if args.tau is not None:
        out.write(str(sb.dgs_bound(n, args.tau)) + "\n")
        return EXIT_OK
    if args.s is not None:
        s = Fraction(args.s)
        if not -1 <= s < 1:
            raise UsageError("-s must lie in [-1, 1)")
        out.write(fmt(sb.levenshtein_sphere(n, s).value, args.decimal) + "\n")
        return EXIT_OK
    if args.M is None or not args.h:
        raise UsageError("sphere needs -s, -t, --points, or -M together with --h")
    try:
        h = parse_potential(args.h, "sphere", n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = sb.ulb_sphere(n, args.M, h)
    out.write(fmt(rep.value, args.decimal) + "\n")
    if args.scan:
        qs = sb.test_quantities(rep.quadrature, args.scan)
        neg = [j for j, v in qs.items() if v < 0]
        out.write(f"# negative test quantities at j = {neg or 'none'}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def analysis(code, h_spec: str | None = None) -> dict:
    dist = distance_distribution(code)
    cov = covering_radius_bounds(dist)
    try:
        rho = covering_radius_exact(code)
    except ResourceLimitError:
        rho = None
    h = parse_potential(h_spec, "hamming") if h_spec else None
    reports = attainment_report(code, h)
    flags = {}
    for r in reports:
        key = f"{r.method}_{r.direction}"
        flags[key] = {"bound": _json_value(r.value), "attained": r.attained}
        if r.method == "hamming":
            flags[key]["perfect"] = r.extra["perfect"]
        if r.method == "rao":
            flags[key]["tight_design"] = r.extra["tight_design"]
    energy = energy_from_distribution(dist.B, code.size, h or parse_potential("newton", "hamming"))
    return {
        "n": code.space.n,
        "q": code.space.q,
        "size": code.size,
        "B": [_json_value(b) for b in dist.B],
        "B_dual": [_json_value(b) for b in dist.Bdual],
        "d": dist.min_distance,
        "d_dual": dist.dual_distance,
        "s": dist.s,
        "s_dual": dist.s_dual,
        "strength": dist.strength,
        "covering_radius": rho,
        "covering_bounds": [cov.delsarte, cov.tietavainen],
        "energy": _json_value(energy),
        "perfect": flags.get("hamming_upper", {}).get("attained", False),
        "attainment": flags,
        "words": ["".join(map(str, w)) if code.space.q <= 10 else ",".join(map(str, w)) for w in code.words],
    }


def cmd_analyze(args, out) -> int:
    code = read_code(args.file)
    data = analysis(code, args.h)
    if args.json:
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    for key in ("n", "q", "size", "d", "d_dual", "s", "s_dual", "strength", "covering_radius"):
        out.write(f"{key:<16} {data[key]}\n")
    out.write(f"{'B':<16} {' '.join(map(str, data['B']))}\n")
    out.write(f"{'B_dual':<16} {' '.join(map(str, data['B_dual']))}\n")
    lo, hi = data["covering_bounds"]
    out.write(f"{'covering bounds':<16} s'={lo} xi={hi:.6g}\n")
    out.write(f"{'energy':<16} {data['energy']}\n")
    out.write(f"{'perfect':<16} {str(data['perfect']).lower()}\n")
    for key, rec in data["attainment"].items():
        out.write(f"{key:<22} bound={rec['bound']} attained={str(rec['attained']).lower()}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# table


TABLE_COLUMNS = ("n", "q", "d") + CODE_METHODS


def _parse_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected a..b") from None
    if lo > hi or lo < 1:
        raise UsageError(f"bad range {text!r}")
    return range(lo, hi + 1)


def table_row(n: int, q: int, d: int) -> list[str]:
    space = HammingSpace(n, q)
    row = [str(n), str(q), str(d)]
    for m in CODE_METHODS:
        try:
            row.append(fmt(code_bound_value(space, d, m)))
        except ResourceLimitError:
            row.append("SKIP")
    return row


def _table_row_star(args):
    return table_row(*args)


def cmd_table(args, out) -> int:
    grid = [(n, args.q, d) for n in _parse_range(args.n) for d in _parse_range(args.d)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_table_row_star, grid))
    else:
        rows = [table_row(*cell) for cell in grid]
    if args.format == "json":
        recs = [dict(zip(TABLE_COLUMNS, r)) for r in rows]
        out.write(json.dumps(recs, indent=1) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        w.writerows(rows)
        out.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# reference


def cmd_reference(args, out) -> int:
    from .reference import FIXTURES, REFERENCE_TABLE, compare_row

    for idx, row in enumerate(REFERENCE_TABLE):
        flag = f"  [flag: {row.flag}]" if row.flag else ""
        out.write(f"{idx:>2}  n={row.n} q={row.q} s'={row.s_dual} d'={row.d_dual} "
                  f"distances={row.distances} |C|={row.size}  {row.comment}{flag}\n")
    if not args.check:
        return EXIT_OK
    out.write("\n")
    failures = 0
    for fx in FIXTURES:
        code = fx.build()
        dist = distance_distribution(code)
        lev = hb.levenshtein_value(code.space, dist.min_distance)
        attains = code.size == lev
        line = f"{fx.name:<28} |C|={code.size} d={dist.min_distance} levenshtein={lev} attains={str(attains).lower()}"
        if fx.row is not None:
            diffs = {k: v for k, v in compare_row(fx.row, code, dist).items() if not v[2]}
            line += f" row={fx.row}"
            if diffs:
                line += " differs: " + ", ".join(f"{k} table={e} actual={a}" for k, (e, a, _) in diffs.items())
            if not attains:
                failures += 1
        out.write(line + "\n")
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lpbounds", description="Linear programming bounds for codes and designs.")
    p.add_argument("--decimal", type=int, metavar="DIGITS", help="print decimals instead of exact fractions")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("code-bound", help="upper bounds on the size of codes with minimum distance d")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("-q", type=int, default=2)
    c.add_argument("-d", type=int, required=True)
    c.add_argument("--method", default="lp", choices=CODE_METHODS + ("plotkin", "all"))
    c.add_argument("-v", "--verbose", action="store_true", help="also print the LP certificate")
    c.set_defaults(func=cmd_code_bound)

    d = sub.add_parser("design-bound", help="lower bounds on the size of tau-designs")
    d.add_argument("-n", type=int, required=True)
    d.add_argument("-q", type=int, default=2)
    d.add_argument("-t", type=int, required=True, help="strength tau")
    d.add_argument("--method", default="lp", choices=("rao", "levenshtein", "lp", "all"))
    d.set_defaults(func=cmd_design_bound)

    e = sub.add_parser("energy-bound", help="lower bounds on the energy of M-point codes")
    e.add_argument("-n", type=int, required=True)
    e.add_argument("-q", type=int, default=2)
    e.add_argument("-M", type=int, required=True)
    e.add_argument("--h", default="newton", help="newton | riesz:<s> | gauss[:<c>] | table:<file>")
    e.add_argument("--method", default="lp", choices=("lp", "ulb", "all"))
    e.set_defaults(func=cmd_energy_bound)

    s = sub.add_parser("sphere", help="spherical codes, designs and energies")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("-s", help="maximal inner product (Levenshtein bound)")
    s.add_argument("-M", type=int, help="number of points (universal energy bound)")
    s.add_argument("-t", "--tau", type=int, help="design strength (DGS bound)")
    s.add_argument("--h", help="newton | riesz:<s> | gauss[:<c>]")
    s.add_argument("--points", help="point-set file to analyze")
    s.add_argument("--scan", type=int, metavar="J", help="report negative test quantities up to degree J")
    s.set_defaults(func=cmd_sphere)

    a = sub.add_parser("analyze", help="distance distribution and attainment report of a code file")
    a.add_argument("file")
    a.add_argument("--json", action="store_true")
    a.add_argument("--h", help="potential for the energy comparison (default newton)")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("table", help="grid of code bounds")
    t.add_argument("-q", type=int, default=2)
    t.add_argument("-n", required=True, help="range a..b")
    t.add_argument("-d", required=True, help="range a..b")
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.add_argument("--jobs", type=int, default=1)
    t.set_defaults(func=cmd_table)

    r = sub.add_parser("reference", help="embedded table of codes attaining the Levenshtein bound")
    r.add_argument("--check", action="store_true", help="generate the fixture codes and verify attainment")
    r.set_defaults(func=cmd_reference)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, CodeFormatError, ValueError, OSError) as exc:
        print(f"lpbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"lpbounds: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvariantError, LPBoundsError, ArithmeticError) as exc:
        print(f"lpbounds: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
