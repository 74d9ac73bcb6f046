"""Command-line interface: check, transform, solve, repl, stats.

Exit codes: 0 success, 1 a requested check failed (or the goal could not be
compiled), 2 parse error, 3 step budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import fixtures
from .chainir import compile_to_registry, dump_registry
from .engines import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    enumerate_prolog,
    eval_abcde,
    eval_bounded,
    eval_continuation,
    eval_stream,
)
from .forms import CHECKERS, MissingModeError, check_gchain, check_moded
from .oracle import sld_solve
from .syntax import (
    Goal,
    ParseError,
    SourceProgram,
    clause_to_str,
    parse_goal,
    parse_program,
    term_to_str,
)
from .syntax import _display_names
from .terms import NIL, is_ground, term_vars
from .transform import (
    GoalError,
    TransformError,
    compile_goal,
    transform_definite,
    transform_moded,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_BUDGET = 3

# Known source/converted clause counts for bundled fixtures.
REFERENCE_COUNTS = {"split": (2, 4), "append": (2, 4)}

TIMING_GOALS = {
    "split": "s([a,b,c,d,e,f,g,h,i,j,k,l],Y,Z)",
    "append": "ap(X,Y,[a,b,c,d,e,f,g,h,i,j,k,l])",
    "nrev": "rev([a,b,c,d,e,f,g,h],R)",
    "quicksort": "qs([s(s(0)),0,s(s(s(0))),s(0)],S)",
    "member": "member(X,[a,b,c,d,e,f,g,h])",
    "reverse": "rv([a,b,c,d,e,f,g,h,i,j,k,l],R)",
    "length": "len([a,b,c,d,e,f,g,h,i,j,k,l],N)",
}


def _default_budget():
    env = os.environ.get("CHAINFORM_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise SystemExit("CHAINFORM_BUDGET must be an integer, got %r" % env)
    return DEFAULT_BUDGET


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chainform",
        description="Convert definite logic programs into chain form and "
        "evaluate goals with deterministic metainterpreters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="check membership in a program class")
    p_check.add_argument("file")
    p_check.add_argument(
        "--form",
        action="append",
        choices=sorted(CHECKERS),
        help="form to check (repeatable; default: moded when every "
        "predicate has a mode directive, chain otherwise)",
    )

    p_tr = sub.add_parser("transform", help="convert a program to chain form")
    p_tr.add_argument("file")
    p_tr.add_argument(
        "--mode", choices=("moded", "definite", "auto"), default="auto"
    )
    p_tr.add_argument("-o", "--output", help="write the converted program here")
    p_tr.add_argument(
        "--registry", action="store_true", help="also print the registry dump"
    )

    p_solve = sub.add_parser("solve", help="evaluate a goal")
    _eval_options(p_solve)
    p_solve.add_argument("-g", "--goal", required=True)
    p_solve.add_argument(
        "--engine",
        choices=("abcde", "continuation", "stream", "bounded"),
        default="abcde",
    )
    p_solve.add_argument("--format", choices=("text", "jsonl"), default="text")

    p_repl = sub.add_parser("repl", help="interactive goal session")
    _eval_options(p_repl)

    p_stats = sub.add_parser("stats", help="clause counts for the bundled fixtures")
    p_stats.add_argument("files", nargs="*", help="extra program files to include")
    p_stats.add_argument(
        "--timing",
        action="store_true",
        help="add an informational timing comparison (source resolution "
        "versus converted-program evaluation); no pass/fail attached",
    )
    return parser


def _eval_options(p):
    p.add_argument("file")
    p.add_argument("--mode", choices=("moded", "definite", "auto"), default="auto")
    p.add_argument("--uni", choices=("match", "unify", "auto"), default="auto")
    p.add_argument("--budget", type=int, default=None)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as err:
        print("parse error: %s" % err, file=sys.stderr)
        return EXIT_PARSE_ERROR
    except BudgetExceededError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_BUDGET


def entry():
    sys.exit(main())


def _load(path) -> SourceProgram:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_program(text, name=name)


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    program = _load(args.file)
    forms = args.form or [
        "moded" if program.fully_moded() else "chain"
    ]
    ok = True
    for form in forms:
        try:
            report = CHECKERS[form](program)
        except MissingModeError as err:
            print("%s: error: %s" % (form, err))
            ok = False
            continue
        print(report)
        ok = ok and report.holds
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# transform


def _pick_mode(program, mode):
    if mode != "auto":
        return mode
    if program.fully_moded() and check_moded(program).holds:
        return "moded"
    return "definite"


def _convert(program, mode):
    mode = _pick_mode(program, mode)
    if mode == "moded":
        return transform_moded(program), mode
    return transform_definite(program), mode


def _render_chain(chain):
    lines = ["%% converted to chain form (%s conversion)" % chain.kind]
    source = chain.to_source()
    for clause, (src_idx, role) in zip(source.clauses, chain.provenance):
        lines.append("%% source clause %d, %s" % (src_idx, role))
        lines.append(clause_to_str(clause))
    return "\n".join(lines) + "\n"


def cmd_transform(args) -> int:
    program = _load(args.file)
    try:
        chain, _ = _convert(program, args.mode)
    except (TransformError, MissingModeError) as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_CHECK_FAILED
    text = _render_chain(chain)
    summary = "%d -> %d" % (len(program.clauses), len(chain.clauses))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    if args.registry:
        sys.stdout.write(dump_registry(compile_to_registry(chain)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve and repl


def _prepare(args, goal_text):
    program = _load(args.file)
    goal = parse_goal(goal_text)
    chain, mode = _convert(program, args.mode)
    registry = compile_to_registry(chain)
    plan = compile_goal(goal, chain, mode)
    uni = args.uni
    if uni == "auto":
        gchain = check_gchain(chain.to_source()).holds
        uni = "match" if (gchain and is_ground(plan.initial)) else "unify"
    budget = args.budget if args.budget is not None else _default_budget()
    return registry, plan, uni, budget


def _binding_line(goal: Goal, subst) -> str:
    goal_vars = term_vars(goal.atom)
    if not goal_vars:
        return "true"
    shown = []
    terms = [subst.get(v, v) for v in goal_vars]
    all_vars = list(goal_vars)
    for t in terms:
        all_vars.extend(term_vars(t))
    names = _display_names(_dedupe(all_vars))
    for v, t in zip(goal_vars, terms):
        shown.append("%s = %s" % (names[v], term_to_str(t, names)))
    return ", ".join(shown)


def _binding_json(goal: Goal, subst) -> dict:
    goal_vars = term_vars(goal.atom)
    all_vars = list(goal_vars)
    terms = [subst.get(v, v) for v in goal_vars]
    for t in terms:
        all_vars.extend(term_vars(t))
    names = _display_names(_dedupe(all_vars))
    return {
        names[v]: term_to_str(t, names) for v, t in zip(goal_vars, terms)
    }


def _dedupe(vs):
    seen = []
    for v in vs:
        if v not in seen:
            seen.append(v)
    return seen


def cmd_solve(args) -> int:
    try:
        registry, plan, uni, budget = _prepare(args, args.goal)
    except (TransformError, MissingModeError, GoalError) as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_CHECK_FAILED
    goal = plan.goal
    if args.engine == "bounded":
        result = eval_bounded(
            plan.initial, plan.continuations, registry, uni, budget
        )
        decoded = plan.decode(result.answer) if result.answer is not None else None
        if args.format == "jsonl":
            payload = {
                "answer": _binding_json(goal, decoded) if decoded is not None else None,
                "resource": result.resource,
            }
            print(json.dumps(payload))
        else:
            print(_binding_line(goal, decoded) if decoded is not None else "no answers")
            print("resource=%d" % result.resource)
        return EXIT_OK
    if args.engine == "abcde":
        answers = eval_abcde(plan.initial, plan.continuations, registry, uni, budget)
    elif args.engine == "continuation":
        answers = eval_continuation(
            plan.initial, plan.continuations, registry, uni, budget
        )
    else:
        answers = eval_stream(
            NIL, [plan.initial], plan.continuations, registry, uni, budget
        )
    decoded = plan.decode_all(answers)
    if not decoded:
        if args.format == "text":
            print("no answers")
        return EXIT_OK
    for subst in decoded:
        if args.format == "jsonl":
            print(json.dumps({"answer": _binding_json(goal, subst)}))
        else:
            print(_binding_line(goal, subst))
    return EXIT_OK


def cmd_repl(args) -> int:
    while True:
        try:
            line = input("?- ")
        except EOFError:
            print()
            return EXIT_OK
        line = line.strip().rstrip(".")
        if not line:
            continue
        try:
            registry, plan, uni, budget = _prepare(args, line)
        except ParseError as err:
            print("parse error: %s" % err)
            continue
        except (TransformError, MissingModeError, GoalError) as err:
            print("error: %s" % err)
            continue
        enum = enumerate_prolog(
            plan.initial, plan.continuations, registry, uni, budget
        )
        _drive(enum, plan)


def _drive(enum, plan):
    while True:
        try:
            raw = enum.next()
        except BudgetExceededError as err:
            print("error: %s" % err)
            return
        if raw is None:
            print("no more answers")
            return
        decoded = plan.decode(raw)
        if decoded is None:
            continue  # filtered by the goal's own bindings
        print(_binding_line(plan.goal, decoded))
        try:
            reply = input("more? (y/n) ")
        except EOFError:
            reply = "n"
        if reply.strip().lower() != "y":
            enum.halt()
            return


# ---------------------------------------------------------------------------
# stats


def cmd_stats(args) -> int:
    rows = []
    programs = [(name, fixtures.load_fixture(name)) for name in fixtures.FIXTURE_NAMES]
    for path in args.files:
        programs.append((os.path.basename(path), _load(path)))
    for name, program in programs:
        chain, mode = _convert(program, "auto")
        note = ""
        ref = REFERENCE_COUNTS.get(name)
        if ref is not None:
            note = (
                "matches reference count"
                if ref == (len(program.clauses), len(chain.clauses))
                else "expected %d -> %d" % ref
            )
        rows.append(
            (name, len(program.clauses), len(chain.clauses), mode, note, program, chain)
        )
    print("%-12s %7s %12s %-9s %s" % ("fixture", "clauses", "transformed", "mode", "note"))
    for name, n_src, n_chain, mode, note, _, _ in rows:
        print("%-12s %7d %12d %-9s %s" % (name, n_src, n_chain, mode, note))
    if args.timing:
        print()
        _timing_report(rows)
    return EXIT_OK


def _timing_report(rows):
    """Informational only: how the conversion plus the interpretation layer
    affects runtime relative to direct resolution of the source."""
    print(
        "%-12s %14s %14s %8s"
        % ("fixture", "source (ms)", "converted (ms)", "ratio")
    )
    for name, _, _, mode, _, program, chain in rows:
        goal_text = TIMING_GOALS.get(name)
        if goal_text is None:
            continue
        goal = parse_goal(goal_text)
        registry = compile_to_registry(chain)
        plan = compile_goal(goal, chain, mode)
        uni = "match" if mode == "moded" else "unify"
        t0 = time.perf_counter()
        reference = sld_solve(program, goal, depth_budget=100_000)
        t1 = time.perf_counter()
        answers = eval_abcde(plan.initial, plan.continuations, registry, uni)
        t2 = time.perf_counter()
        assert len(plan.decode_all(answers)) == len(reference.answers)
        src_ms = (t1 - t0) * 1000
        conv_ms = (t2 - t1) * 1000
        ratio = conv_ms / src_ms if src_ms > 0 else float("inf")
        print("%-12s %14.2f %14.2f %7.1fx" % (name, src_ms, conv_ms, ratio))


COMMANDS = {
    "check": cmd_check,
    "transform": cmd_transform,
    "solve": cmd_solve,
    "repl": cmd_repl,
    "stats": cmd_stats,
}


if __name__ == "__main__":
    entry()
