"""Seeded random instances and checks for the algebraic laws of tables and the
equivalence of the compositional semantics with the immediate-consequence
operator.

Every law is a function ``(case, ...) -> True | False | None`` where ``None``
means the instance was skipped (clipping made the law inapplicable). Table and
relation operations are looked up through their modules at call time, so a
test can monkeypatch one to check that violations are caught.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from tabsem import relations, semantics, syntax, tables
from tabsem.relations import Relation, relational_to_herbrand
from tabsem.syntax import Clause, ProceduralProgram
from tabsem.tables import Table
from tabsem.terms import Atom, Fn, Signature, Universe, Var, variables_of

VAR_POOL = tuple(Var(n) for n in ("W", "X", "Y", "Z"))
EXTRA_VARS = (Var("V"),)
PROGRAM_VARS = tuple(Var(n) for n in ("X", "Y", "Z"))
PRED_NAMES = ("p", "q", "r")


# ---------------------------------------------------------------------------
# generators


def random_universe(rng: random.Random, max_depth: int) -> Universe:
    consts = ["a", "b"][: rng.randint(1, 2)]
    funcs = {"f": 1} if rng.random() < 0.8 else {}
    return Universe(Signature(frozenset(consts), funcs), rng.randint(0, max_depth))


def random_term(rng: random.Random, u: Universe, vs, depth: int):
    sig = u.signature
    choices = ["const"] + (["var"] * 2 if vs else [])
    if depth > 0 and sig.functions:
        choices.append("fn")
    kind = rng.choice(choices)
    if kind == "var":
        return rng.choice(vs)
    if kind == "const":
        return Fn(rng.choice(sorted(sig.constants)))
    f, n = rng.choice(sorted(sig.functions.items()))
    return Fn(f, [random_term(rng, u, vs, depth - 1) for _ in range(n)])


def random_table(rng: random.Random, u: Universe, max_rows: int = 4, variables=None) -> Table:
    if variables is None:
        variables = [v for v in VAR_POOL if rng.random() < 0.5]
    variables = sorted(variables, key=lambda v: v.name)
    rows = []
    for _ in range(rng.randint(0, max_rows)):
        free = [v for v in variables if rng.random() < 0.4]
        row = {}
        for v in variables:
            if v in free:
                continue
            if rng.random() < 0.6:
                row[v] = rng.choice(u.terms())
            else:
                row[v] = random_term(rng, u, free, 2)
        rows.append(row)
    return Table(variables, rows)


def random_relation(rng: random.Random, u: Universe, arity: int, max_size: int = 6) -> Relation:
    herb = u.terms()
    return Relation(arity, [tuple(rng.choice(herb) for _ in range(arity)) for _ in range(rng.randint(0, max_size))])


def random_args(rng: random.Random, u: Universe, arity: int, vs=VAR_POOL[1:]) -> tuple:
    return tuple(random_term(rng, u, list(vs), 2) for _ in range(arity))


def random_program(rng: random.Random, u: Universe) -> ProceduralProgram:
    """At most 3 predicates, 4 clauses, 2 body atoms and 3 variables per clause."""
    preds = {p: rng.randint(0, 2) for p in PRED_NAMES[: rng.randint(1, 3)]}
    names = sorted(preds)
    procs: dict = {p: set() for p in preds}
    for _ in range(rng.randint(1, 4)):
        head = rng.choice(names)
        vs = list(PROGRAM_VARS[: rng.randint(0, 3)])
        body = frozenset(
            Atom(q, tuple(random_term(rng, u, vs, 1) for _ in range(preds[q])))
            for q in (rng.choice(names) for _ in range(rng.randint(0, 2)))
        )
        params = tuple(random_term(rng, u, vs, 1) for _ in range(preds[head]))
        procs[head].add(Clause(params, body))
    return ProceduralProgram({p: frozenset(cs) for p, cs in procs.items()}, preds)


def random_interpretation(rng: random.Random, u: Universe, arities) -> dict:
    return {p: random_relation(rng, u, n) for p, n in arities.items()}


# ---------------------------------------------------------------------------
# laws


def law_commutative(rng, u):
    t0, t1 = random_table(rng, u), random_table(rng, u)
    return (t0, t1), tables.product(t0, t1) == tables.product(t1, t0)


def law_associative(rng, u):
    t0, t1, t2 = random_table(rng, u), random_table(rng, u), random_table(rng, u)
    lhs = tables.product(tables.product(t0, t1), t2)
    rhs = tables.product(t0, tables.product(t1, t2))
    return (t0, t1, t2), lhs == rhs and tables.tables_equivalent(lhs, rhs, u)


def law_product_all_order(rng, u):
    ts = [random_table(rng, u, 3) for _ in range(3)]
    from itertools import permutations

    results = set()
    for perm in permutations(ts):
        acc = tables.TOP
        for t in perm:
            acc = tables.product(acc, t)
        results.add(acc)
    return tuple(ts), len(results) == 1 and tables.product_all(ts) in results


def law_bottom_absorbing(rng, u):
    t = random_table(rng, u)
    bot = tables.bottom([v for v in VAR_POOL if rng.random() < 0.5])
    ok = tables.product(bot, t).is_bottom and tables.product(t, bot).is_bottom
    return (t, bot), ok


def law_top_unit(rng, u):
    t = random_table(rng, u)
    return (t,), tables.product(tables.TOP, t) == t and tables.product(t, tables.TOP) == t


def law_self_product(rng, u):
    t = random_table(rng, u)
    return (t,), tables.tables_equivalent(tables.product(t, t), t, u)


def law_exact(rng, u):
    t = random_table(rng, u)
    vs = list(t.variables)
    n = rng.randint(1, 3)
    if vs:
        terms = [random_term(rng, u, vs, 1) for _ in range(n)]
        missing = [v for v in vs if v not in variables_of(terms)]
        terms += missing
        rng.shuffle(terms)
    else:
        terms = [random_term(rng, u, [], 1) for _ in range(n)]
    params = tuple(terms)
    rel, clipped = tables.project_counting(params, t, u)
    if clipped:
        return (params, t), None
    return (params, t), tables.tables_equivalent(tables.filter(rel, params), t, u)


def law_inclusion(rng, u):
    n = rng.randint(0, 3)
    r = random_relation(rng, u, n)
    args = random_args(rng, u, n)
    return (r, args), tables.project(args, tables.filter(r, args), u).tuples <= r.tuples


def law_distinct_vars(rng, u):
    n = rng.randint(0, 4)
    r = random_relation(rng, u, n)
    args = tuple(rng.sample(VAR_POOL, n))
    return (r, args), tables.project(args, tables.filter(r, args), u) == r


def law_tab_cyl(rng, u):
    t0, t1 = random_table(rng, u, 3), random_table(rng, u, 3)
    union = set(t0.variables) | set(t1.variables)
    big = union | {v for v in EXTRA_VARS if rng.random() < 0.5}
    lhs = tables.ground_table(tables.product(t0, t1), u)
    c0 = relations.rel_cylinder(tables.ground_table(t0, u), big, u)
    c1 = relations.rel_cylinder(tables.ground_table(t1, u), big, u)
    rhs = relations.rel_project(c0 & c1, union)
    return (t0, t1), lhs == rhs


def law_cylinder_lemma(rng, u):
    t = random_table(rng, u, 3)
    big = set(t.variables) | {v for v in VAR_POOL + EXTRA_VARS if rng.random() < 0.3}
    return (t, tuple(sorted(big, key=lambda v: v.name))), tables.table_cylinder_identity(t, big, u)


def law_main_theorem(rng, u):
    p = random_program(rng, u)
    interp = random_interpretation(rng, u, p.arities)
    lhs = relational_to_herbrand(semantics.eval_program(semantics.EvalContext(p, interp, u)))
    rhs = semantics.tp_step(syntax.to_clausal(p), relational_to_herbrand(interp), u)
    return (p, interp), lhs == rhs


def _lattice_bound(p: ProceduralProgram, u: Universe) -> int:
    n = len(u.terms())
    return sum(n**a for a in p.arities.values()) + 2


def law_lfp_theorem(rng, u):
    p = random_program(rng, u)
    bound = _lattice_bound(p, u)
    m = semantics.lfp_M(p, u, bound)
    t = semantics.lfp_T(syntax.to_clausal(p), u, bound)
    ok = m.converged and t.converged and relational_to_herbrand(m.result) == t.result
    return (p,), ok


def law_monotone(rng, u):
    p = random_program(rng, u)
    small = random_interpretation(rng, u, p.arities)
    big = {q: r | random_relation(rng, u, r.arity) for q, r in small.items()}
    m0 = semantics.eval_program(semantics.EvalContext(p, small, u))
    m1 = semantics.eval_program(semantics.EvalContext(p, big, u))
    return (p, small, big), relations.interpretation_le(m0, m1)


def random_renaming(rng: random.Random, p: ProceduralProgram) -> dict:
    by_arity: dict = {}
    for q, n in p.arities.items():
        by_arity.setdefault(n, []).append(q)
    rho = {}
    for group in by_arity.values():
        group = sorted(group)
        targets = group[:]
        rng.shuffle(targets)
        rho.update(zip(group, targets))
    return rho


def law_renaming(rng, u):
    p = random_program(rng, u)
    rho = random_renaming(rng, p)
    bound = _lattice_bound(p, u)
    before = semantics.lfp_M(p, u, bound).result
    after = semantics.lfp_M(syntax.rename_predicates(p, rho), u, bound).result
    return (p, rho), all(after[rho[q]] == before[q] for q in p.arities)


TABLE_LAWS = {
    "product-commutative": law_commutative,
    "product-associative": law_associative,
    "product-fold-order": law_product_all_order,
    "bottom-absorbing": law_bottom_absorbing,
    "top-unit": law_top_unit,
    "self-product-equivalent": law_self_product,
    "filter-project-exact": law_exact,
    "project-filter-inclusion": law_inclusion,
    "distinct-variables-equality": law_distinct_vars,
    "product-cylinder-intersection": law_tab_cyl,
    "cylinder-grounding-commute": law_cylinder_lemma,
}

PROGRAM_LAWS = {
    "one-step-equivalence": law_main_theorem,
    "fixpoint-equivalence": law_lfp_theorem,
    "monotonicity": law_monotone,
    "renaming-invariance": law_renaming,
}

LAWS = {**TABLE_LAWS, **PROGRAM_LAWS}


# ---------------------------------------------------------------------------
# running and shrinking


@dataclass
class LawResult:
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexample: Optional[str] = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _smaller(part) -> Iterator:
    if isinstance(part, Table):
        rows = part.sorted_rows()
        for i in range(len(rows)):
            yield Table._raw(part.variables, rows[:i] + rows[i + 1 :])
    elif isinstance(part, Relation):
        ts = part.sorted()
        for i in range(len(ts)):
            yield Relation._raw(part.arity, frozenset(ts[:i] + ts[i + 1 :]))
    elif isinstance(part, ProceduralProgram):
        for q, proc in sorted(part.procedures.items()):
            cls = sorted(proc, key=repr)
            for i, cl in enumerate(cls):
                yield ProceduralProgram({**part.procedures, q: frozenset(cls[:i] + cls[i + 1 :])}, part.arities)
                for call in sorted(cl.body, key=repr):
                    slim = Clause(cl.params, cl.body - {call})
                    yield ProceduralProgram({**part.procedures, q: frozenset(cls[:i] + [slim] + cls[i + 1 :])}, part.arities)
    elif isinstance(part, dict) and all(isinstance(v, Relation) for v in part.values()):
        for q in sorted(part):
            for smaller in _smaller(part[q]):
                yield {**part, q: smaller}


def _recheck(name: str, parts: tuple, u: Universe) -> Optional[bool]:
    """Re-evaluate a law on fixed parts (used while shrinking)."""
    if name == "product-commutative":
        t0, t1 = parts
        return tables.product(t0, t1) == tables.product(t1, t0)
    if name == "product-associative":
        t0, t1, t2 = parts
        lhs = tables.product(tables.product(t0, t1), t2)
        rhs = tables.product(t0, tables.product(t1, t2))
        return lhs == rhs and tables.tables_equivalent(lhs, rhs, u)
    if name == "bottom-absorbing":
        t, bot = parts
        return tables.product(bot, t).is_bottom and tables.product(t, bot).is_bottom
    if name == "top-unit":
        (t,) = parts
        return tables.product(tables.TOP, t) == t and tables.product(t, tables.TOP) == t
    if name == "self-product-equivalent":
        (t,) = parts
        return tables.tables_equivalent(tables.product(t, t), t, u)
    if name == "product-cylinder-intersection":
        t0, t1 = parts
        union = set(t0.variables) | set(t1.variables)
        lhs = tables.ground_table(tables.product(t0, t1), u)
        c0 = relations.rel_cylinder(tables.ground_table(t0, u), union, u)
        c1 = relations.rel_cylinder(tables.ground_table(t1, u), union, u)
        return lhs == relations.rel_project(c0 & c1, union)
    if name == "project-filter-inclusion":
        r, args = parts
        return tables.project(args, tables.filter(r, args), u).tuples <= r.tuples
    if name == "distinct-variables-equality":
        r, args = parts
        return tables.project(args, tables.filter(r, args), u) == r
    if name == "one-step-equivalence":
        p, interp = parts
        lhs = relational_to_herbrand(semantics.eval_program(semantics.EvalContext(p, interp, u)))
        return lhs == semantics.tp_step(syntax.to_clausal(p), relational_to_herbrand(interp), u)
    if name == "fixpoint-equivalence":
        (p,) = parts
        bound = _lattice_bound(p, u)
        m = semantics.lfp_M(p, u, bound)
        t = semantics.lfp_T(syntax.to_clausal(p), u, bound)
        return m.converged and t.converged and relational_to_herbrand(m.result) == t.result
    return None


def shrink(name: str, parts: tuple, u: Universe, budget: int = 200) -> tuple:
    """Greedily drop rows, tuples, clauses and calls while the law still fails."""
    changed = True
    while changed and budget > 0:
        changed = False
        for i, part in enumerate(parts):
            for smaller in _smaller(part):
                budget -= 1
                cand = parts[:i] + (smaller,) + parts[i + 1 :]
                try:
                    verdict = _recheck(name, cand, u)
                except Exception:
                    verdict = None
                if verdict is None:
                    return parts
                if verdict is False:
                    parts = cand
                    changed = True
                    break
                if budget <= 0:
                    break
            if changed or budget <= 0:
                break
    return parts


def describe(parts: tuple, u: Universe) -> str:
    lines = [f"universe: {u!r}"]
    for i, part in enumerate(parts):
        if isinstance(part, ProceduralProgram):
            text = syntax.format_program(syntax.to_clausal(part)).strip() or "(empty program)"
            lines.append(f"arg{i}: program\n" + "\n".join("    " + s for s in text.splitlines()))
        else:
            lines.append(f"arg{i}: {part!r}")
    return "\n".join(lines)


def run_law(
    name: str,
    cases: int,
    seed: int,
    max_depth: int = 2,
    law: Callable = None,
) -> LawResult:
    law = law or LAWS[name]
    # per-law stream so adding a law does not perturb the others
    rng = random.Random(f"{seed}:{name}")
    res = LawResult(name)
    start = time.perf_counter()
    for _ in range(cases):
        u = random_universe(rng, max_depth)
        parts, verdict = law(rng, u)
        if verdict is None:
            res.skipped += 1
        elif verdict:
            res.passed += 1
        else:
            res.failed += 1
            if res.counterexample is None:
                res.counterexample = describe(shrink(name, parts, u), u)
    res.seconds = time.perf_counter() - start
    return res


def check_laws(cases: int = 500, seed: int = 0, max_depth: int = 2, names=None) -> list:
    names = list(names or LAWS)
    return [run_law(n, cases, seed, max_depth) for n in names]


def format_results(results: list, seed: int, cases: int, max_depth: int) -> str:
    lines = [f"% seed: {seed}  cases: {cases}  depth: <= {max_depth}"]
    width = max(len(r.name) for r in results)
    for r in results:
        status = "ok" if r.ok else "FAIL"
        lines.append(
            f"{r.name.ljust(width)}  passed {r.passed:5d}  failed {r.failed:5d}  skipped {r.skipped:5d}  {status}"
        )
    bad = [r for r in results if not r.ok]
    for r in bad:
        lines.append(f"counterexample for {r.name}:")
        lines.extend("  " + s for s in r.counterexample.splitlines())
    lines.append(f"summary: {len(results)} laws, {len(bad)} violated")
    return "\n".join(lines)
