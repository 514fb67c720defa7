"""``ddl-kant`` command-line front end.

Exit codes:
    0   success (valid at bounds / model found / decided verdict / matrix reproduced)
    1   parse command failed, or the test matrix differs from the expected one
    2   countermodel found / no model at bounds / undetermined verdict
    3   search budget exhausted
    4   inconsistent scenario assumptions
    64  usage error
    65  malformed input (syntax, sort or symbol errors)
    66  input file missing or unreadable
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded, DdlError, InconsistentAssumptions, ParseError
from .harness import render_table, run_suite
from .kantian import DEFAULT_WF_READING, SYSTEM_NAMES, WF_READINGS, expand, get_system
from .scenario import UNDETERMINED, corpus_path, judge, parse_scenario, render_verdict
from .search import (
    COUNTERMODEL, DEFAULT_MAX_MILLIS, MODEL_FOUND, Bounds, Budget, SearchResult, check_valid,
    find_model,
)
from .syntax import conj, free_sorts, parse_many, pretty, to_sexpr

log = logging.getLogger("ddl_kant")

EXIT_OK, EXIT_FAIL, EXIT_NEGATIVE, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3, 4
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT = 64, 65, 66


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    def _get_help_string(self, action):
        if action.default in (None, False) or action.default is argparse.SUPPRESS:
            return action.help
        return super()._get_help_string(action)


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _InputError(f"cannot read {path}: {e.strerror or e}") from e


def _formulas(path: str, wf_reading: str) -> list:
    return [expand(f, wf_reading) for f in parse_many(_read(path), closed=True)]


def _budget(args) -> Budget:
    return Budget(max_millis=args.budget_ms)


def _emit_result(r: SearchResult, args, headline: str) -> None:
    if args.json:
        print(json.dumps(r.to_dict(timing=not args.no_timing), indent=2))
        return
    print(headline)
    if r.model is not None:
        print(r.model.describe())
    if not args.no_timing:
        print(f"nodes: {r.stats.get('nodes')}   time: {r.stats.get('millis')} ms")


def cmd_parse(args) -> int:
    try:
        fs = parse_many(_read(args.file))
    except DdlError as e:
        print(f"{args.file}: {e}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        print(json.dumps([{"formula": to_sexpr(f), "free": free_sorts(f)} for f in fs], indent=2))
    else:
        for f in fs:
            print(pretty(f))
    return EXIT_OK


def cmd_check(args) -> int:
    system = get_system(args.system, args.wf_reading)
    goal = conj(_formulas(args.formula_file, args.wf_reading))
    b = Bounds(args.worlds, args.subjects)
    r = check_valid(list(system.axioms), goal, b, budget=_budget(args))
    if r.outcome == COUNTERMODEL:
        _emit_result(r, args, f"COUNTERMODEL under system {args.system}")
        return EXIT_NEGATIVE
    _emit_result(r, args, f"VALID at bounds (w={b.n_w}, s={b.n_s}) under system {args.system}")
    return EXIT_OK


def cmd_find_model(args) -> int:
    system = get_system(args.system, args.wf_reading)
    axioms = list(system.axioms)
    if args.axioms_file:
        axioms += _formulas(args.axioms_file, args.wf_reading)
    constraints = _formulas(args.constraints_file, args.wf_reading) if args.constraints_file else []
    b = Bounds(args.worlds, args.subjects)
    r = find_model(axioms, constraints, b, budget=_budget(args))
    if r.outcome == MODEL_FOUND:
        _emit_result(r, args, "MODEL FOUND")
        return EXIT_OK
    _emit_result(r, args, f"NO MODEL at bounds (w={b.n_w}, s={b.n_s})")
    return EXIT_NEGATIVE


def _scenario_path(path: str) -> str:
    if Path(path).exists():
        return path
    shipped = corpus_path(Path(path).name)
    return str(shipped) if shipped.exists() else path


def cmd_judge(args) -> int:
    sc = parse_scenario(_read(_scenario_path(args.scenario)))
    if args.system:
        sc = dataclasses.replace(sc, system=args.system)
    if args.worlds or args.subjects:
        sc = dataclasses.replace(sc, bounds=dataclasses.replace(
            sc.bounds, n_w=args.worlds or sc.bounds.n_w, n_s=args.subjects or sc.bounds.n_s))
    try:
        v = judge(sc, budget=_budget(args), wf_reading=args.wf_reading)
    except InconsistentAssumptions as e:
        if args.json:
            print(json.dumps({"status": "InconsistentAssumptions", "scenario": sc.name,
                              "bounds": sc.bounds.to_dict(), "error": str(e)}, indent=2))
        else:
            print(f"INCONSISTENT ASSUMPTIONS: {e}")
        return EXIT_INCONSISTENT
    print(render_verdict(v, "json" if args.json else "text", timing=not args.no_timing))
    return EXIT_NEGATIVE if v.status == UNDETERMINED else EXIT_OK


def cmd_test_suite(args) -> int:
    n_w, n_s = args.worlds, args.subjects
    if args.bounds:
        n_w, n_s = args.bounds
    r = run_suite(Bounds(n_w, n_s), _budget(args), args.wf_reading, timing=not args.no_timing)
    fmt = "json" if args.json else "markdown" if args.markdown else "text"
    print(render_table(r, fmt, timing=not args.no_timing))
    for w in r.warnings:
        log.warning(w)
    return EXIT_OK if r.matches_expected else EXIT_FAIL


def _bounds_pair(text: str) -> tuple[int, int]:
    try:
        w, s = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected WORLDS,SUBJECTS, e.g. 3,2") from None
    if w < 1 or s < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return w, s


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    fmt = _HelpFormatter
    default_budget = int(os.environ.get("DDLKANT_BUDGET_MS") or DEFAULT_MAX_MILLIS)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    common.add_argument("--no-timing", action="store_true",
                        help="omit wall-clock figures so repeated runs are byte-identical")
    common.add_argument("--budget-ms", type=_positive, default=default_budget,
                        help="time budget per query (env DDLKANT_BUDGET_MS)")
    common.add_argument("--wf-reading", choices=WF_READINGS, default=DEFAULT_WF_READING,
                        help="well-formedness reading: B = non-entailment, A = pointwise")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("--worlds", type=_positive, default=3, help="maximum number of worlds")
    sized.add_argument("--subjects", type=_positive, default=2, help="maximum number of subjects")

    p = _Parser(prog="ddl-kant", formatter_class=fmt,
                description="Dyadic deontic logic with a universal-law axiom: bounded model "
                            "finding, validity checking and maxim judgement.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("parse", parents=[common], formatter_class=fmt,
                        help="parse a formula file and pretty-print it")
    sp.add_argument("file")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("check", parents=[common, sized], formatter_class=fmt,
                        help="check validity of formulas at bounds")
    sp.add_argument("--system", choices=SYSTEM_NAMES, default="naive",
                    help="system whose axioms are assumed")
    sp.add_argument("--formula-file", required=True,
                    help="formulas to check (several formulas are conjoined)")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("find-model", parents=[common, sized], formatter_class=fmt,
                        help="search for a model of axioms and constraints")
    sp.add_argument("--system", choices=SYSTEM_NAMES, default="naive",
                    help="system whose axioms are included")
    sp.add_argument("--axioms-file", help="extra axioms")
    sp.add_argument("--constraints-file", help="constraints the model must satisfy")
    sp.set_defaults(run=cmd_find_model)

    sp = sub.add_parser("judge", parents=[common], formatter_class=fmt,
                        help="judge the maxim of a .ked scenario")
    sp.add_argument("scenario")
    sp.add_argument("--system", choices=SYSTEM_NAMES, help="override the scenario's system")
    sp.add_argument("--worlds", type=_positive, help="override the scenario's world bound")
    sp.add_argument("--subjects", type=_positive, help="override the scenario's subject bound")
    sp.set_defaults(run=cmd_judge)

    sp = sub.add_parser("test-suite", parents=[common, sized], formatter_class=fmt,
                        help="run the eight faithfulness tests on all systems")
    sp.add_argument("--bounds", type=_bounds_pair, metavar="W,S",
                    help="shorthand for --worlds W --subjects S")
    sp.add_argument("--markdown", action="store_true", help="markdown table")
    sp.set_defaults(run=cmd_test_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s: %(message)s")
    if getattr(args, "json", False) and getattr(args, "markdown", False):
        parser.error("--json and --markdown are mutually exclusive")
    try:
        return args.run(args)
    except _InputError as e:
        print(f"ddl-kant: {e}", file=sys.stderr)
        return EXIT_NOINPUT
    except BudgetExceeded as e:
        print(f"ddl-kant: {e}", file=sys.stderr)
        if getattr(args, "json", False):
            print(json.dumps({"outcome": "BudgetExceeded", "stats": e.stats}, indent=2))
        return EXIT_BUDGET
    except ParseError as e:
        print(f"ddl-kant: syntax error: {e}", file=sys.stderr)
        return EXIT_DATA
    except DdlError as e:
        print(f"ddl-kant: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
