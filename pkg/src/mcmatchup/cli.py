"""Command line entry point.

Exit codes: 0 success, 1 bad input, 2 time limit hit (an incumbent is still
reported), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .bench import (
    DEFAULT_P1_RANGE,
    DEFAULT_PROLONGATION,
    SOLVERS,
    GeneratorConfig,
    SuiteConfig,
    format_table,
    generate,
    run_bench,
    run_solver,
    summarize,
)
from .core import InputError, Instance, left_shift
from .covering2 import export_lp_mc2, solve_mc2
from .covering3 import export_lp_mc3
from .fileio import dump_instance, parse_distributions, read_instance, write_results, write_trace
from .runtime import sample_scenario, simulate
from .shaping import derive_fshape
from .transforms import level_sum_lower_bound, level_sums, minus, plus

EXIT_OK, EXIT_INPUT, EXIT_TIME_LIMIT, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("mcmatchup")


def _int_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI got {text!r}") from None
    return lo, hi


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _default_solver(inst: Instance) -> str:
    L = inst.max_criticality
    return "mc2" if L <= 2 else "mc3" if L == 3 else "lcf"


def cmd_generate(args) -> int:
    ranges = tuple(args.prolongation) if args.prolongation else (DEFAULT_PROLONGATION,)
    cfg = GeneratorConfig(args.n, args.max_criticality, args.split, args.p1_range, ranges, args.seed)
    _emit(dump_instance(generate(cfg)), args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.input).instance
    name = args.solver or _default_solver(inst)
    out = run_solver(name, inst, args.time_limit, args.seed)
    sched = left_shift(inst, out.permutation)
    if args.format == "json":
        doc = {
            "solver": name,
            "makespan": out.makespan,
            "optimal": out.optimal,
            "gap": out.gap,
            "lower_bound": out.lower_bound,
            "certificate": out.certificate,
            "permutation": list(out.permutation),
            "starts": {str(t): sched[t] for t in out.permutation},
            **out.extra,
        }
        _emit(json.dumps(doc, indent=1) + "\n", args.output)
    else:
        lines = [f"solver     {name}", f"makespan   {out.makespan}", f"optimal    {out.optimal}"]
        if out.gap is not None:
            lines.append(f"gap [%]    {out.gap:.2f}")
        if out.certificate:
            lines.append(f"certificate {out.certificate}")
        lines.append("task start")
        lines += [f"{t} {sched[t]}" for t in out.permutation]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_TIME_LIMIT if out.timed_out else EXIT_OK


def cmd_bound(args) -> int:
    inst = read_instance(args.input).instance
    doc = {"level_sums": level_sums(inst), "level_sum": level_sum_lower_bound(inst)}
    timed_out = False
    if inst.max_criticality == 3:
        for key, sub in (("lb_minus", minus(inst, 2)), ("lb_plus", plus(inst, 2))):
            r = solve_mc2(sub, time_limit=args.time_limit, seed=args.seed)
            doc[key] = r.makespan if r.optimal else r.lower_bound
            timed_out |= not r.optimal
    if args.format == "json":
        _emit(json.dumps(doc, indent=1) + "\n", args.output)
    else:
        _emit("".join(f"{k} {v}\n" for k, v in doc.items()), args.output)
    return EXIT_TIME_LIMIT if timed_out else EXIT_OK


def cmd_simulate(args) -> int:
    data = read_instance(args.input)
    inst = data.instance
    name = args.solver or _default_solver(inst)
    out = run_solver(name, inst, args.time_limit, args.seed)
    sched = left_shift(inst, out.permutation)
    scen = sample_scenario(inst, data.level_probabilities, args.seed)
    trace = simulate(inst, sched, scen)
    rows = list(trace.rows(sched))
    if args.output in (None, "-"):
        write_trace(sys.stdout, rows)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_trace(fh, rows)
    return EXIT_OK


def cmd_bench(args) -> int:
    for s in args.solvers:
        if s not in SOLVERS:
            raise InputError(f"unknown solver {s!r}")
    ranges = tuple(args.prolongation) if args.prolongation else (DEFAULT_PROLONGATION,)
    suite = SuiteConfig(args.sizes, args.count, args.max_criticality, tuple(args.solvers),
                        args.time_limit, args.seed, args.p1_range, ranges)
    records = run_bench(suite)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_results(fh, records)
    if args.format == "csv" and not args.output:
        write_results(sys.stdout, records)
    else:
        sys.stdout.write(format_table(summarize(records)) + "\n")
    return EXIT_OK


def cmd_derive(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        levels, items = parse_distributions(fh.read(), args.input)
    tasks = [derive_fshape(it.distribution, levels, it.criticality, it.id) for it in items]
    _emit(dump_instance(Instance(tuple(tasks))), args.output)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    inst = read_instance(args.input).instance
    L = inst.max_criticality
    if L > 3:
        raise InputError("LP export supports at most three criticality levels")
    _emit(export_lp_mc2(inst) if L <= 2 else export_lp_mc3(inst), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcmatchup", description="Mixed-criticality match-up scheduling")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inp=True, fmt=None):
        if inp:
            p.add_argument("--input", "-i", required=True)
        p.add_argument("--output", "-o")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--time-limit", type=float, default=None, help="seconds")
        if fmt:
            p.add_argument("--format", choices=fmt, default=fmt[0])

    p = sub.add_parser("generate", help="random instance")
    common(p, inp=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-criticality", type=int, default=2)
    p.add_argument("--split", type=_float_list, default=None, help="proportion per level")
    p.add_argument("--p1-range", type=_int_range, default=DEFAULT_P1_RANGE)
    p.add_argument("--prolongation", type=_int_range, action="append",
                   help="increment range per added level; repeat for each level")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve an instance")
    common(p, fmt=["text", "json"])
    p.add_argument("--solver", choices=list(SOLVERS))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bound", help="lower bounds")
    common(p, fmt=["text", "json"])
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", help="execute a solved schedule under a sampled scenario")
    common(p)
    p.add_argument("--solver", choices=list(SOLVERS))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="benchmark suite")
    common(p, inp=False, fmt=["table", "csv"])
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--max-criticality", type=int, default=2)
    p.add_argument("--solvers", type=lambda s: s.split(","), default=["mc2"])
    p.add_argument("--p1-range", type=_int_range, default=DEFAULT_P1_RANGE)
    p.add_argument("--prolongation", type=_int_range, action="append")
    p.set_defaults(func=cmd_bench, time_limit=300.0)

    p = sub.add_parser("derive", help="F-shapes from processing-time distributions")
    common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("export-lp", help="covering model in LP format")
    common(p)
    p.set_defaults(func=cmd_export_lp)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # anything else is a bug
        log.exception("internal error")
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
