"""Compositional meaning of procedural programs, the immediate-consequence
oracle, and least-fixpoint drivers for both."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Mapping, Optional

from tabsem import tables
from tabsem.relations import Relation, empty_interpretation
from tabsem.syntax import Clause, HornClause, ProceduralProgram, sentence_arities
from tabsem.tables import Table
from tabsem.terms import Atom, Fn, Term, Universe, Var, variables_of


class UnknownPredicate(ValueError):
    pass


@dataclass(frozen=True)
class EvalContext:
    program: ProceduralProgram
    interpretation: Mapping[str, Relation]
    universe: Universe


@dataclass
class FixpointReport:
    result: object
    iterations: int
    converged: bool
    sizes: list = field(default_factory=list)


def eval_call(ctx: EvalContext, call: Atom) -> Table:
    rel = ctx.interpretation.get(call.pred)
    if rel is None:
        raise UnknownPredicate(f"no relation for procedure symbol {call.pred}")
    return tables.filter(rel, call.args)


def eval_body(ctx: EvalContext, body: Iterable[Atom]) -> Table:
    return tables.product_all(eval_call(ctx, c) for c in body)


def eval_clause(ctx: EvalContext, cl: Clause) -> Relation:
    return tables.project(cl.params, eval_body(ctx, cl.body), ctx.universe)


def eval_procedure(ctx: EvalContext, proc: Iterable[Clause], arity: int) -> Relation:
    out: set = set()
    for cl in proc:
        out |= eval_clause(ctx, cl).tuples
    return Relation._raw(arity, frozenset(out))


def eval_program(ctx: EvalContext) -> dict:
    p = ctx.program
    return {sym: eval_procedure(ctx, p.procedures[sym], p.arities[sym]) for sym in p.predicates}


def _total(interp: Mapping[str, Relation]) -> int:
    return sum(len(r) for r in interp.values())


def lfp_M(
    p: ProceduralProgram,
    u: Universe,
    max_iters: int = 100,
    externs: Optional[Mapping[str, Relation]] = None,
) -> FixpointReport:
    """Iterate the meaning function from the empty interpretation.

    External relations (bound to symbols without clauses) are held fixed.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    externs = dict(externs or {})
    for sym, rel in externs.items():
        if p.procedures.get(sym):
            raise ValueError(f"{sym} has clauses and cannot be bound externally")
        if p.arities.get(sym, rel.arity) != rel.arity:
            raise ValueError(f"external relation for {sym} has arity {rel.arity}, expected {p.arities[sym]}")
    p = p.with_predicates({s: r.arity for s, r in externs.items()})
    cur = {**empty_interpretation(p.arities), **externs}
    sizes = [_total(cur)]
    for k in range(1, max_iters + 1):
        nxt = {**eval_program(EvalContext(p, cur, u)), **externs}
        sizes.append(_total(nxt))
        if nxt == cur:
            return FixpointReport(cur, k, True, sizes)
        cur = nxt
    return FixpointReport(cur, max_iters, False, sizes)


def query(
    p: ProceduralProgram,
    goal: Iterable[Atom],
    u: Universe,
    max_iters: int = 100,
    externs: Optional[Mapping[str, Relation]] = None,
):
    """Answer table for a goal at the least fixpoint; returns ``(table, report)``."""
    goal = list(goal)
    known = set(p.arities) | set(externs or {})
    for a in goal:
        if a.pred not in known:
            raise UnknownPredicate(f"goal mentions unknown predicate {a.pred}")
    report = lfp_M(p, u, max_iters, externs)
    ctx = EvalContext(p, report.result, u)
    return eval_body(ctx, goal), report


# ---------------------------------------------------------------------------
# immediate-consequence operator (independent of the table machinery)


def _ground(t: Term, theta: dict) -> Term:
    if isinstance(t, Var):
        return theta[t]
    if t.ground:
        return t
    return Fn(t.functor, [_ground(a, theta) for a in t.args])


def _match(pattern: Term, value: Term, theta: dict) -> bool:
    """One-way matching of a pattern against a ground term, extending ``theta``."""
    if isinstance(pattern, Var):
        bound = theta.get(pattern)
        if bound is None:
            theta[pattern] = value
            return True
        return bound == value
    if pattern.ground:
        return pattern == value
    if not isinstance(value, Fn) or value.functor != pattern.functor or len(value.args) != len(pattern.args):
        return False
    return all(_match(p, v, theta) for p, v in zip(pattern.args, value.args))


def _tp_enumerate(c: HornClause, atoms: frozenset, herb: tuple, d: int, out: set) -> None:
    vs = variables_of((*c.head.args, *(x for a in c.body for x in a.args)), ordered=True)
    for values in cartesian(herb, repeat=len(vs)):
        theta = dict(zip(vs, values))
        if all(Atom(a.pred, tuple(_ground(x, theta) for x in a.args)) in atoms for a in c.body):
            head = tuple(_ground(x, theta) for x in c.head.args)
            if all(x.depth <= d for x in head):
                out.add(Atom(c.head.pred, head))


def _tp_match(c: HornClause, by_pred: dict, herb: tuple, d: int, out: set) -> None:
    body = list(c.body)

    def extend(i: int, theta: dict):
        if i == len(body):
            yield theta
            return
        a = body[i]
        for fact in by_pred.get((a.pred, len(a.args)), ()):
            t2 = dict(theta)
            if all(_match(p, v, t2) for p, v in zip(a.args, fact)):
                yield from extend(i + 1, t2)

    head_vars = sorted(variables_of(c.head.args), key=lambda v: v.name)
    for theta in extend(0, {}):
        free = [v for v in head_vars if v not in theta]
        for values in cartesian(herb, repeat=len(free)):
            full = {**theta, **dict(zip(free, values))}
            head = tuple(_ground(x, full) for x in c.head.args)
            if all(x.depth <= d for x in head):
                out.add(Atom(c.head.pred, head))


def tp_step(s: Iterable[HornClause], i: Iterable[Atom], u: Universe, method: str = "enumerate") -> frozenset:
    """One application of the immediate-consequence operator at depth bound d.

    ``enumerate`` tries every grounding of every clause over Herb_d.
    ``match`` joins body atoms against ``i`` by one-way matching and only
    enumerates head variables left unbound; it yields the same set and is
    meant for universes too large to enumerate.
    """
    atoms = frozenset(i)
    herb = u.terms()
    out: set = set()
    if method == "enumerate":
        for c in s:
            _tp_enumerate(c, atoms, herb, u.depth, out)
    elif method == "match":
        by_pred: dict = {}
        for a in atoms:
            by_pred.setdefault((a.pred, len(a.args)), []).append(a.args)
        for c in s:
            _tp_match(c, by_pred, herb, u.depth, out)
    else:
        raise ValueError(f"unknown method {method!r}")
    return frozenset(out)


def lfp_T(
    s: Iterable[HornClause],
    u: Universe,
    max_iters: int = 100,
    externs: Iterable[Atom] = (),
    method: str = "enumerate",
) -> FixpointReport:
    """Least fixpoint of the immediate-consequence operator from the empty set.

    ``externs`` are ground atoms for predicates without clauses; they are
    present in every iterate.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    s = frozenset(s)
    sentence_arities(s)
    fixed = frozenset(externs)
    cur = fixed
    sizes = [len(cur)]
    for k in range(1, max_iters + 1):
        nxt = tp_step(s, cur, u, method) | fixed
        sizes.append(len(nxt))
        if nxt == cur:
            return FixpointReport(cur, k, True, sizes)
        cur = nxt
    return FixpointReport(cur, max_iters, False, sizes)
