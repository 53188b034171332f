"""Command-line front end: eval | verify | export.

Rationals cross this boundary as exact strings ("p/q" or integers);
floats are opt-in via --float and only for export.  Exit codes: 0 all
good, 1 at least one check failed, 2 usage error.  Identical arguments
(and seed) produce byte-identical output; wall-clock timings are only
included when --timings is passed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import HahnParams, KrawtchoukParams, MeixnerParams, family_lattice
from .measures import weight_table
from .operators import OperatorSpec, operator_matrix
from .polynomials import eigenpoly, eigenpoly_table
from .serialize import (
    csv_text,
    gram_json,
    gram_rows,
    json_text,
    matrix_json,
    matrix_triplets,
    parse_rational,
    rational_str,
    value_str,
    weight_table_json,
    weight_table_rows,
)
from . import verify as V

CHECK_NAMES = (
    "normalization",
    "compatibility",
    "boundary",
    "adjointness",
    "commutators",
    "degree-invariance",
    "eigen",
    "type-one",
    "shifts",
    "rodrigues",
    "glue",
    "gram",
    "completeness",
    "pair-orthogonality",
    "limits",
)


def _parse_rational_list(text: str):
    return tuple(parse_rational(part) for part in text.split(","))


def _parse_int_list(text: str):
    return tuple(int(part) for part in text.split(","))


def build_params(args):
    family = args.family
    a = _parse_rational_list(args.a)
    if args.n is not None and len(a) != args.n:
        raise ValueError(f"--a has {len(a)} entries but --n is {args.n}")
    if family == "hahn":
        if args.b is None or args.N is None:
            raise ValueError("hahn needs --b and --N")
        return HahnParams(a, parse_rational(args.b), args.N)
    if family == "krawtchouk":
        if args.N is None:
            raise ValueError("krawtchouk needs --N")
        return KrawtchoukParams(a, args.N)
    if family == "meixner":
        if args.beta is None:
            raise ValueError("meixner needs --beta")
        return MeixnerParams(a, parse_rational(args.beta))
    raise ValueError(f"unknown family {family!r}")


def _family_args(p):
    p.add_argument("--family", required=True, choices=("hahn", "krawtchouk", "meixner"))
    p.add_argument("--n", type=int, help="number of variables (checked against --a)")
    p.add_argument("--N", type=int, help="lattice bound (hahn/krawtchouk)")
    p.add_argument("--a", required=True, help="comma-separated positive rationals, e.g. 1/2,3,2")
    p.add_argument("--b", help="hahn reservoir parameter (positive rational)")
    p.add_argument("--beta", help="meixner parameter (positive rational)")
    p.add_argument("--xmax", type=int, help="meixner truncation bound")


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    params = build_params(args)
    m = _parse_int_list(args.m)
    if args.x is not None:
        x = _parse_int_list(args.x)
        value = eigenpoly(m, x, params)
        _emit(args, rational_str(value) + "\n")
        return 0
    lattice = family_lattice(params, xmax=args.xmax)
    table = eigenpoly_table(m, params, lattice)
    if args.format == "json":
        payload = {
            "family": params.family,
            "m": list(m),
            "points": [list(p) for p in lattice.points],
            "values": [value_str(v) for v in table.values],
        }
        _emit(args, json_text(payload))
    elif args.format == "csv":
        header = [f"x{i+1}" for i in range(lattice.n)] + ["value"]
        rows = [
            list(map(str, p)) + [value_str(v)]
            for p, v in zip(lattice.points, table.values)
        ]
        _emit(args, csv_text(header, rows))
    else:
        lines = [
            f"{p} {rational_str(v)}" for p, v in zip(lattice.points, table.values)
        ]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _run_checks(args, params) -> list:
    name = args.check
    xmax = args.xmax
    m_max = args.m_max
    if name is None:
        return V.run_suite(params, m_max=m_max, xmax=xmax, seed=args.seed)
    if name == "normalization":
        return [V.normalization_check(params, xmax=xmax)]
    if name == "compatibility":
        return [V.compatibility_check(params, xmax=xmax)]
    if name == "boundary":
        return [V.boundary_safety_check(params)]
    if name == "adjointness":
        return [V.adjointness_check(params, xmax=xmax)]
    if name == "commutators":
        return [V.commutator_check(params, xmax=xmax)]
    if name == "degree-invariance":
        M = 2 if m_max is None else m_max
        return [V.degree_invariance_report(params, M, xmax=xmax)]
    if name == "eigen":
        mm = m_max if m_max is not None else 3
        return V.eigen_suite(params, mm, xmax=xmax)
    if name == "type-one":
        mm = m_max if m_max is not None else 3
        return V.type_one_suite(params, mm, xmax=xmax)
    if name == "shifts":
        deg = m_max if m_max is not None else 5
        box = 6
        out = [V.pair_recursion_check(params.a[0], params.a_tail(1), deg, box,
                                      "hahn" if params.family == "hahn" else "km")]
        out.append(V.pair_shift_check(params.a[0], params.a_tail(1), deg, box,
                                      "hahn" if params.family == "hahn" else "km"))
        if params.family == "hahn":
            out.append(V.sv_shift_check(params.a[0], params.b, params.N, deg))
            out.append(V.sv_difference_equation_check(params.a[0], params.b, params.N, deg))
        return out
    if name == "rodrigues":
        import random

        rng = random.Random(args.seed)
        deg = m_max if m_max is not None else 6
        return [
            V.rodrigues_check(deg, V.random_rational(rng), V.random_rational(rng), 6)
            for _ in range(3)
        ]
    if name == "glue":
        if params.n < 3:
            return [V.CheckReport("glue", V.describe(params), V.SKIP, None, 0.0,
                                  "needs n >= 3")]
        return [V.glue_check(params, 2, mi, mj, xmax=xmax)
                for mi, mj in ((1, 1), (2, 1), (1, 2))]
    if name == "gram":
        mm = m_max if m_max is not None else (1 if params.family == "meixner" else 3)
        return [V.gram_check(params, mm, xmax=xmax).report]
    if name == "completeness":
        return [V.completeness_check(params)]
    if name == "pair-orthogonality":
        mm = m_max if m_max is not None else 1
        return [V.pair_orthogonality_report(params, mm, xmax=xmax)]
    if name == "limits":
        if params.family == "hahn":
            raise ValueError("limit checks apply to krawtchouk and meixner")
        return V.limit_suite(params.family, params, seed=args.seed)
    raise ValueError(f"unknown check {name!r}")


def cmd_verify(args) -> int:
    params = build_params(args)
    reports = _run_checks(args, params)
    failed = any(r.status == V.FAIL for r in reports)
    if args.format == "json":
        payload = {
            "instance": V.describe(params),
            "reports": [r.to_dict(with_timing=args.timings) for r in reports],
            "failed": failed,
        }
        _emit(args, json_text(payload))
    else:
        lines = [r.text_row() for r in reports]
        summary = f"{sum(r.status == V.PASS for r in reports)} pass, " \
                  f"{sum(r.status == V.FAIL for r in reports)} fail, " \
                  f"{sum(r.status == V.SKIP for r in reports)} skipped"
        _emit(args, "\n".join(lines) + "\n" + summary + "\n")
    return 1 if failed else 0


def _parse_op(text: str):
    if text in ("total", "single"):
        return text, None
    if text.startswith("exchange"):
        return "exchange", int(text[len("exchange"):])
    raise ValueError(f"unknown operator {text!r} (total, single, exchangeK)")


def cmd_export(args) -> int:
    params = build_params(args)
    as_float = args.float
    if args.what == "weights":
        w = weight_table(params, xmax=args.xmax)
        if args.format == "json":
            _emit(args, json_text(weight_table_json(w, as_float)))
        else:
            _emit(args, csv_text(*weight_table_rows(w, as_float)))
        return 0
    if args.what == "operator":
        kind, index = _parse_op(args.op)
        spec = OperatorSpec(params, kind, index)
        M = operator_matrix(spec, family_lattice(params, xmax=args.xmax))
        if args.format == "json":
            _emit(args, json_text(matrix_json(M, as_float)))
        else:
            _emit(args, csv_text(*matrix_triplets(M, as_float)))
        return 0
    if args.what == "gram":
        mm = args.m_max if args.m_max is not None else (
            1 if params.family == "meixner" else min(params.N, 3)
        )
        result = V.gram_check(params, mm, xmax=args.xmax)
        if args.format == "json":
            _emit(args, json_text(gram_json(result.degrees, result.matrix, as_float)))
        else:
            _emit(args, csv_text(*gram_rows(result.degrees, result.matrix, as_float)))
        return 0
    raise ValueError(f"unknown export target {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvortho",
        description="Exact multivariate Hahn/Krawtchouk/Meixner systems: "
        "evaluate, verify, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an eigenpolynomial")
    _family_args(p_eval)
    p_eval.add_argument("--m", required=True, help="degree multi-index, e.g. 0,1")
    p_eval.add_argument("--x", help="lattice point; omit for the full table")
    p_eval.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p_eval.add_argument("--output", help="write to a file instead of stdout")
    p_eval.set_defaults(fn=cmd_eval)

    p_verify = sub.add_parser("verify", help="run identity checks")
    _family_args(p_verify)
    p_verify.add_argument("--check", choices=CHECK_NAMES, help="run a single check")
    p_verify.add_argument("--m-max", type=int, dest="m_max")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--format", choices=("text", "json"), default="text")
    p_verify.add_argument("--timings", action="store_true",
                          help="include wall times in JSON output")
    p_verify.add_argument("--output", help="write to a file instead of stdout")
    p_verify.set_defaults(fn=cmd_verify)

    p_export = sub.add_parser("export", help="export tables and matrices")
    _family_args(p_export)
    p_export.add_argument("--what", required=True, choices=("weights", "operator", "gram"))
    p_export.add_argument("--op", default="total", help="total | single | exchangeK")
    p_export.add_argument("--m-max", type=int, dest="m_max")
    p_export.add_argument("--format", choices=("csv", "json"), default="csv")
    p_export.add_argument("--float", action="store_true",
                          help="emit floats instead of exact rationals")
    p_export.add_argument("--output", help="write to a file instead of stdout")
    p_export.set_defaults(fn=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
