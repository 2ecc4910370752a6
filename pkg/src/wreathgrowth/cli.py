"""Command-line surface: compute series, run the oracles, compare, estimate
radii, dump orbit trees.

Exit codes: 0 success/agreement, 1 comparison mismatch, 2 invalid input,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .groups import (
    FINITE_PRESETS,
    SERIES_PRESETS,
    GroupSeriesInput,
    GroupTableError,
    load_group_json,
    preset_lamp,
    preset_table,
)
from .oracle import (
    DEFAULT_BUDGET,
    BudgetError,
    OracleSpec,
    conjugacy_census,
    sgs_prefix,
    unionfind_census,
)
from .series import RootBracketError, TruncatedSeries
from .treegroup import TreeGroupSpec, tree_orbit_representatives
from .wreathseries import (
    WreathSpec,
    cgs_closed_form_c2,
    cgs_closed_form_c2c2,
    cgs_closed_form_z,
    cgs_infinite_cursor,
    cgs_torsion_cursor,
    cgs_total,
    cgs_trivial_cursor,
    lamplighter_asymptotic_check,
    rc_report,
)


class InputError(ValueError):
    pass


def _parse_base(text: str) -> TreeGroupSpec:
    try:
        m_str, n_str = text.split(",")
        return TreeGroupSpec(int(m_str), int(n_str))
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad --base {text!r}: expected M,N") from exc


def _load_lamp(name: str, degree: int) -> GroupSeriesInput:
    if name in FINITE_PRESETS or name in SERIES_PRESETS:
        return preset_lamp(name, degree)
    if os.path.exists(name):
        from .groups import GroupSeriesInput as GSI

        return GSI.from_table(load_group_json(name), degree)
    raise InputError(f"unknown lamp {name!r}: not a preset or a readable file")


def _load_lamp_table(name: str):
    if name in FINITE_PRESETS:
        return preset_table(name)
    if name in SERIES_PRESETS:
        raise InputError(f"lamp {name!r} has no finite table; the oracle needs one")
    if os.path.exists(name):
        return load_group_json(name)
    raise InputError(f"unknown lamp {name!r}: not a preset or a readable file")


def _budget(args) -> int:
    env = os.environ.get("WREATH_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _closed_form_for(base: TreeGroupSpec, lamp: GroupSeriesInput, degree: int):
    if (base.num_free, base.num_involutions) == (0, 1):
        return cgs_closed_form_c2(lamp, degree)
    if (base.num_free, base.num_involutions) == (1, 0):
        return cgs_closed_form_z(lamp, degree)
    if (base.num_free, base.num_involutions) == (0, 2):
        return cgs_closed_form_c2c2(lamp, degree)
    return None


def cmd_series(args) -> int:
    base = _parse_base(args.base)
    lamp = _load_lamp(args.lamp, args.degree)
    spec = WreathSpec(lamp, base, args.degree)
    parts = {
        "cgs_infinite_cursor": cgs_infinite_cursor(spec),
        "cgs_torsion_cursor": cgs_torsion_cursor(spec),
        "cgs_trivial_cursor": cgs_trivial_cursor(spec),
        "cgs_total": cgs_total(spec),
    }
    if args.closed_form:
        closed = _closed_form_for(base, lamp, args.degree)
        if closed is None:
            raise InputError(
                "--closed-form only for base 0,1 (C2), 1,0 (Z) or 0,2 (C2*C2)"
            )
        parts["closed_form"] = closed
    if args.format == "json":
        payload = {
            "lamp": args.lamp,
            "base": [base.num_free, base.num_involutions],
            "degree": args.degree,
            "series": {name: s.to_dict() for name, s in parts.items()},
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        names = sorted(parts)
        print("degree," + ",".join(names))
        for m in range(args.degree + 1):
            print(f"{m}," + ",".join(_coeff_str(parts[n][m]) for n in names))
    return 0


def cmd_census(args) -> int:
    base = _parse_base(args.base)
    table = _load_lamp_table(args.lamp)
    spec = OracleSpec(table, base)
    budget = _budget(args)
    out = {"lamp": args.lamp, "base": [base.num_free, base.num_involutions]}
    start = time.monotonic()
    if args.oracle in ("key", "both"):
        counts = conjugacy_census(spec, args.radius, budget)
        out["key_census"] = {str(m): counts[m] for m in sorted(counts)}
    if args.oracle in ("unionfind", "both"):
        counts, stable = unionfind_census(spec, args.radius, args.conj_bound, budget)
        out["unionfind_census"] = {str(m): counts[m] for m in sorted(counts)}
        out["unionfind_stable"] = stable
    out["seconds"] = round(time.monotonic() - start, 3)
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_compare(args) -> int:
    base = _parse_base(args.base)
    degree = max(args.degree, args.radius)
    lamp = _load_lamp(args.lamp, degree)
    table = _load_lamp_table(args.lamp)
    spec = WreathSpec(lamp, base, degree)
    formula = cgs_total(spec)
    census = conjugacy_census(OracleSpec(table, base), args.radius, _budget(args))
    print("degree,formula,oracle")
    first_mismatch = None
    for m in range(args.radius + 1):
        f_coeff = formula[m]
        o_coeff = census[m]
        print(f"{m},{_coeff_str(f_coeff)},{o_coeff}")
        if f_coeff != o_coeff and first_mismatch is None:
            first_mismatch = m
    if first_mismatch is not None:
        print(f"MISMATCH at degree {first_mismatch}", file=sys.stderr)
        return 1
    return 0


def cmd_rc(args) -> int:
    base = _parse_base(args.base)
    lamp = _load_lamp(args.lamp, args.degree)
    spec = WreathSpec(lamp, base, args.degree)
    sgs = None
    if args.radius > 0:
        table = _load_lamp_table(args.lamp)
        sgs = sgs_prefix(OracleSpec(table, base), args.radius, _budget(args))
    report = rc_report(
        spec,
        tol=args.tol,
        cgs_window=args.window,
        sgs_series=sgs,
        sgs_window=args.sgs_window,
    )
    out = {
        "unit_root": f"{report.unit_root:.10g}",
        "cgs_estimate": f"{report.cgs_estimate:.10g}",
    }
    if report.sgs_estimate is not None:
        out["sgs_estimate"] = f"{report.sgs_estimate:.10g}"
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_asymptotics(args) -> int:
    degree = args.degree if args.degree else max(args.m_hi, 1)
    rows = lamplighter_asymptotic_check(degree, args.m_lo, args.m_hi)
    print("m,coefficient,estimate,ratio")
    for row in rows:
        print(f"{row.m},{row.coefficient},{row.estimate:.10g},{row.ratio:.10g}")
    return 0


def cmd_trees(args) -> int:
    base = _parse_base(args.base)
    reps = tree_orbit_representatives(base, args.max_edges)
    payload = {
        "base": [base.num_free, base.num_involutions],
        "max_edges": args.max_edges,
        "orbits": [rep.to_dict(base) for rep in reps],
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wreathgrowth",
        description="Growth and conjugacy growth series of wreath products over tree base groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, degree_default=12):
        p.add_argument("--lamp", required=True, help="preset name or group JSON path")
        p.add_argument("--base", required=True, help="M,N generator counts of L")
        p.add_argument("--degree", type=int, default=degree_default)

    p = sub.add_parser("series", help="exact conjugacy series coefficients")
    add_common(p)
    p.add_argument("--closed-form", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("census", help="brute-force conjugacy census")
    p.add_argument("--lamp", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--oracle", choices=("key", "unionfind", "both"), default="key")
    p.add_argument("--conj-bound", type=int, default=4)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("compare", help="formula vs oracle, exit 1 on mismatch")
    add_common(p)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rc", help="radius-of-convergence report")
    add_common(p, degree_default=60)
    p.add_argument("--radius", type=int, default=0, help="oracle radius for the sgs estimate (0 = skip)")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--window", type=int, default=20)
    p.add_argument("--sgs-window", type=int, default=6)
    p.set_defaults(func=cmd_rc)

    p = sub.add_parser("asymptotics", help="lamplighter coefficient asymptotics")
    p.add_argument("m_lo", type=int)
    p.add_argument("m_hi", type=int)
    p.add_argument("--degree", type=int, default=0)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("trees", help="orbit representatives of origin subtrees")
    p.add_argument("--base", required=True)
    p.add_argument("--max-edges", type=int, required=True)
    p.set_defaults(func=cmd_trees)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GroupTableError, RootBracketError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
