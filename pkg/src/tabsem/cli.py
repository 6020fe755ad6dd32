"""Command-line front end.

Exit codes: 0 success/converged, 1 usage or parse error, 2 fixpoint not
reached within --max-iters, 3 law violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from tabsem import laws, semantics, syntax, tables
from tabsem.formats import load_relation, render_interpretation, render_relation, render_table
from tabsem.relations import Relation
from tabsem.syntax import ArityError, ParseError
from tabsem.terms import Fn, Signature, Universe, Var

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED, EXIT_LAW = 0, 1, 2, 3


@dataclass
class RunConfig:
    depth: int = 2
    max_iters: int = 100
    inputs: list = field(default_factory=list)
    externs: dict = field(default_factory=dict)  # symbol -> path
    format: str = "pretty"
    seed: int = 0

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("--depth must be >= 0")
        if self.max_iters < 1:
            raise ValueError("--max-iters must be >= 1")


class UsageError(Exception):
    pass


def _load_program(cfg: RunConfig):
    clauses = set()
    for path in cfg.inputs:
        text = Path(path).read_text(encoding="utf-8")
        try:
            clauses |= syntax.parse_program(text)
        except ParseError as e:
            raise UsageError(f"{path}:{e}") from e
    try:
        program = syntax.to_procedural(clauses)
    except ArityError as e:
        raise UsageError(str(e)) from e
    externs = {}
    for sym, path in sorted(cfg.externs.items()):
        text = Path(path).read_text(encoding="utf-8")
        try:
            externs[sym] = load_relation(text, program.arities.get(sym))
        except (ParseError, ValueError) as e:
            raise UsageError(f"{path}: {e}") from e
    return program, externs


def _universe(cfg: RunConfig, program, externs, extra_terms=()) -> Universe:
    sig = syntax.infer_signature(program)
    ext_terms = [x for rel in externs.values() for t in rel.tuples for x in t]
    try:
        sig = sig.merge(Signature.of_terms(ext_terms)).merge(Signature.of_terms(extra_terms))
    except ValueError as e:
        raise UsageError(str(e)) from e
    if not sig.constants:
        raise UsageError("the program mentions no constants, so its Herbrand universe is empty")
    return Universe(sig, cfg.depth)


def _header(cfg: RunConfig, report) -> list:
    return [
        f"% depth: {cfg.depth}",
        f"% max-iters: {cfg.max_iters}",
        f"% converged: {'yes' if report.converged else 'no'}",
        f"% iterations: {report.iterations}",
        f"% sizes: {' '.join(map(str, report.sizes))}",
    ]


def cmd_fixpoint(cfg: RunConfig, out) -> int:
    program, externs = _load_program(cfg)
    u = _universe(cfg, program, externs)
    try:
        report = semantics.lfp_M(program, u, cfg.max_iters, externs)
    except ValueError as e:
        raise UsageError(str(e)) from e
    lines = _header(cfg, report)
    body = render_interpretation(report.result, cfg.format)
    if body:
        lines.append(body)
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_query(cfg: RunConfig, goal_text: str, out) -> int:
    program, externs = _load_program(cfg)
    try:
        goal = syntax.parse_goal(goal_text)
    except ParseError as e:
        raise UsageError(f"goal: {e}") from e
    goal_terms = [x for a in goal for x in a.args]
    u = _universe(cfg, program, externs, goal_terms)
    try:
        answer, report = semantics.query(program, goal, u, cfg.max_iters, externs)
    except ValueError as e:
        raise UsageError(str(e)) from e
    lines = _header(cfg, report)
    if answer.is_bottom:
        lines.append("no")
    elif answer.is_top:
        lines.append("yes")
    else:
        lines.append(render_table(answer, cfg.format))
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_check_laws(cfg: RunConfig, cases: int, names, out) -> int:
    unknown = [n for n in names or () if n not in laws.LAWS]
    if unknown:
        raise UsageError(f"unknown law(s): {', '.join(unknown)}; known: {', '.join(laws.LAWS)}")
    results = laws.check_laws(cases, cfg.seed, cfg.depth, names)
    out.write(laws.format_results(results, cfg.seed, cases, cfg.depth) + "\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_LAW


# The clause (f(y),z) :- {p(x,f(y)), p(f(x),z)} with a fixed relation for p.
_a, _b = Fn("a"), Fn("b")


def _f(t):
    return Fn("f", (t,))


EXAMPLE_RELATION = Relation(2, [(_a, _f(_b)), (_f(_a), _b), (_f(_a), _f(_b)), (_f(_b), _f(_a))])
X, Y, Z = Var("X"), Var("Y"), Var("Z")
EXAMPLE_CALL_1 = (X, _f(Y))
EXAMPLE_CALL_2 = (_f(X), Z)
EXAMPLE_PARAMS = (_f(Y), Z)


def worked_example(depth: int = 2) -> dict:
    """The four intermediate values of the worked clause, keyed by stage."""
    u = Universe(Signature(frozenset({"a", "b"}), {"f": 1}), depth)
    call1 = tables.filter(EXAMPLE_RELATION, EXAMPLE_CALL_1)
    call2 = tables.filter(EXAMPLE_RELATION, EXAMPLE_CALL_2)
    body = tables.product(call1, call2)
    clause = tables.project(EXAMPLE_PARAMS, body, u)
    return {"call1": call1, "call2": call2, "body": body, "clause": clause}


def cmd_example(cfg: RunConfig, out) -> int:
    ex = worked_example(cfg.depth)
    fmt = cfg.format
    sections = [
        "% clause (f(Y),Z) :- {p(X,f(Y)), p(f(X),Z)}",
        "M(p) =",
        render_relation(EXAMPLE_RELATION, fmt),
        "",
        "M(p(X,f(Y))) = M(p) : (X,f(Y)) =",
        render_table(ex["call1"], fmt),
        "",
        "M(p(f(X),Z)) = M(p) : (f(X),Z) =",
        render_table(ex["call2"], fmt),
        "",
        "M(p(X,f(Y)), p(f(X),Z)) = M(p(X,f(Y))) * M(p(f(X),Z)) =",
        render_table(ex["body"], fmt),
        "",
        "(f(Y),Z) / M(p(X,f(Y)), p(f(X),Z)) =",
        render_relation(ex["clause"], fmt),
    ]
    out.write("\n".join(sections) + "\n")
    return EXIT_OK


def _extern(spec: str):
    sym, sep, path = spec.partition("=")
    if not sep or not sym or not path:
        raise argparse.ArgumentTypeError(f"expected SYMBOL=FILE, got {spec!r}")
    return sym, path


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tabsem", description="Table-algebra semantics of pure Prolog.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, files=None):
        if files:
            p.add_argument("file", nargs=files, help="program source")
            p.add_argument("--extern", action="append", type=_extern, default=[], metavar="SYM=FILE",
                           help="bind an undefined predicate to a relation file")
            p.add_argument("--max-iters", type=int, default=100)
        p.add_argument("--depth", type=int, default=2, help="Herbrand depth bound (affects the semantics)")
        p.add_argument("--format", choices=("pretty", "records"), default="pretty")

    common(sub.add_parser("fixpoint", help="compute the least fixpoint of a program"), "+")
    q = sub.add_parser("query", help="answer a goal at the least fixpoint")
    common(q, 1)
    q.add_argument("goal")
    laws_p = sub.add_parser("check-laws", help="run the randomized law and oracle suite")
    laws_p.add_argument("--seed", type=int, default=0)
    laws_p.add_argument("--cases", type=int, default=500)
    laws_p.add_argument("--law", action="append", default=None, help="restrict to the named law(s)")
    common(laws_p)
    common(sub.add_parser("example", help="replay the worked clause example"))
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    if hasattr(out, "reconfigure"):
        out.reconfigure(encoding="utf-8")
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            depth=args.depth,
            max_iters=getattr(args, "max_iters", 100),
            inputs=list(getattr(args, "file", [])),
            externs=dict(getattr(args, "extern", [])),
            format=args.format,
            seed=getattr(args, "seed", 0),
        )
        if args.command == "fixpoint":
            return cmd_fixpoint(cfg, out)
        if args.command == "query":
            return cmd_query(cfg, args.goal, out)
        if args.command == "check-laws":
            return cmd_check_laws(cfg, args.cases, args.law, out)
        return cmd_example(cfg, out)
    except (UsageError, ValueError, OSError) as e:
        print(f"tabsem: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
