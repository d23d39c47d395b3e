"""Command-line interface: ``invcensus <subcommand> ...``.

Exit codes: 0 success, 2 precondition errors, 3 resource caps.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DomainError, IntegrityError, ParseError, PreconditionError, ResourceError
from .presentations import DEFAULT_COSET_CAP


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _sym_block_generators(r: int, k: int):
    from .f2linalg import F2Matrix

    if k < 2 or r % k:
        raise DomainError(f"--sym {k} needs r to be a multiple of {k}")
    swap, cycle = list(range(r)), list(range(r))
    for b in range(0, r, k):
        swap[b], swap[b + 1] = b + 1, b
        for i in range(k):
            cycle[b + i] = b + (i + 1) % k
    return [F2Matrix.permutation(swap), F2Matrix.permutation(cycle)]


def cmd_count_subspaces(args) -> None:
    from .f2linalg import F2Matrix, count_T_free_subspaces, gaussian_binomial, matrix_group_closure

    gens = []
    if args.sym:
        gens += _sym_block_generators(args.r, args.sym)
    for path in args.matrix or []:
        gens.append(F2Matrix.from_text(Path(path).read_text()))
    out = {"r": args.r, "s": args.s, "total": gaussian_binomial(args.r, args.s)}
    if gens:
        group = matrix_group_closure(gens)
        exact, lower = count_T_free_subspaces(args.r, args.s, group, workers=args.workers)
        out.update(group_order=len(group), free_exact=exact, free_lower_bound=lower)
    _emit(out)


def cmd_build_quotient(args) -> None:
    from .presentations import build_quotient

    q = build_quotient(args.d, args.c, args.coset_cap)
    if args.out:
        Path(args.out).write_text(q.group.to_text())
    _emit({"d": q.d, "c": q.c, "order": q.group.order, "xgens": list(q.xgens), "ygens": list(q.ygens)})


def cmd_series(args) -> None:
    from .presentations import build_quotient
    from .series import faithfulness_check, p_series, rank_table

    q = build_quotient(args.d, args.c, args.coset_cap)
    series = p_series(q)
    table = rank_table(q, series)
    faithful = {}
    for i in range(2, q.c + 1):
        try:
            faithful[str(i)] = faithfulness_check(q, i, series)
        except DomainError:
            faithful[str(i)] = None
    table["symd_faithful"] = faithful
    _emit(table)


def _config(args):
    from .census import PipelineConfig

    return PipelineConfig(
        d=args.d,
        c=args.c,
        m=args.m,
        s_window=tuple(args.s_window) if args.s_window else None,
        coset_cap=args.coset_cap,
        workers=args.workers,
        output=args.output,
        k_values=tuple(args.k) if getattr(args, "k", None) else (0,),
        order_cap=getattr(args, "order_cap", 480),
    )


def _summarise(records, stats) -> dict:
    return {
        "records": [
            {"digest": r.digest[:16], "order": r.order, "valency": r.valency, "grr": r.grr, "max_s": r.max_s, "aut_order": r.aut_order}
            for r in records
        ],
        "stats": stats,
    }


def cmd_grr_pipeline(args) -> None:
    from .census import grr_lower_pipeline

    stats: dict = {}
    recs = grr_lower_pipeline(_config(args), stats)
    _emit(_summarise(recs, stats))


def cmd_five_arc(args) -> None:
    from .census import five_arc_pipeline

    stats: dict = {}
    recs = five_arc_pipeline(_config(args), stats)
    _emit(_summarise(recs, stats))


def cmd_g_count(args) -> None:
    from .census import g_count

    _emit({"d": args.d, "m": args.m, "g": g_count(args.d, args.m)})


def cmd_report(args) -> None:
    from .census import census_report

    _emit(census_report(args.store))


def cmd_crosscheck(args) -> None:
    from .census import ingest_census_crosscheck

    _emit(ingest_census_crosscheck(args.file, args.order_cap))


def _pipeline_flags(p: argparse.ArgumentParser, d: int = 3, c: int = 3) -> None:
    p.add_argument("--d", type=int, default=d, help="number of involutory generators")
    p.add_argument("--c", type=int, default=c, help="nilpotency class of the quotient")
    p.add_argument("--m", type=int, default=None, help="target order 2^m")
    p.add_argument("--s-window", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--coset-cap", type=int, default=DEFAULT_COSET_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", help="store directory to append records to")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invcensus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-subspaces", help="count (T-free) codimension-s subspaces of GF(2)^r")
    p.add_argument("r", type=int)
    p.add_argument("s", type=int)
    p.add_argument("--sym", type=int, help="T = Sym(k) permuting each block of k coordinates")
    p.add_argument("--matrix", action="append", help="file with a generator matrix of T (repeatable)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_count_subspaces)

    for name, func, helptext in (
        ("build-quotient", cmd_build_quotient, "W_d / gamma_{c+1} by coset enumeration"),
        ("series", cmd_series, "rank table and Sym(d) faithfulness of a quotient"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("d", type=int)
        p.add_argument("c", type=int)
        p.add_argument("--coset-cap", type=int, default=DEFAULT_COSET_CAP)
        if name == "build-quotient":
            p.add_argument("--out", help="write the multiplication table here")
        p.set_defaults(func=func)

    p = sub.add_parser("grr-pipeline", help="GRR lower-bound construction")
    _pipeline_flags(p)
    p.set_defaults(func=cmd_grr_pipeline)

    p = sub.add_parser("five-arc", help="5-arc-transitive covers of the Tutte-Coxeter graph")
    _pipeline_flags(p)
    p.add_argument("--k", type=int, nargs="+", default=[0], help="voltage dimensions to try")
    p.add_argument("--order-cap", type=int, default=480)
    p.set_defaults(func=cmd_five_arc)

    p = sub.add_parser("g-count", help="groups of order 2^m generated by d involutions")
    p.add_argument("d", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_g_count)

    p = sub.add_parser("report", help="JSON summary of a census store")
    p.add_argument("store")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("crosscheck", help="count graphs with |Aut| > n^2 in a graph6 census file")
    p.add_argument("file")
    p.add_argument("--order-cap", type=int, default=48)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PreconditionError, ParseError, IntegrityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
