"""Tables: sets of substitutions over a variable index set, and their algebra.

A table row is stored as a tuple of terms aligned with the table's name-sorted
index variables. Unconstrained variables hold themselves (identity entries),
so a row is total on the index set while remaining an idempotent solved form.
"""

from __future__ import annotations

from collections import defaultdict
from functools import reduce
from typing import Iterable, Mapping, Sequence

from tabsem.relations import Relation, VarRelation, rel_cylinder
from tabsem.terms import (
    Term,
    Universe,
    UnificationError,
    Var,
    _subst,
    count_clipped,
    instantiate,
    match_ground,
    solve,
    solve_pairs,
    tuple_key,
    variables_of,
)


def _sorted_vars(vs: Iterable[Var]) -> tuple:
    return tuple(sorted(set(vs), key=lambda v: v.name))


class Table:
    __slots__ = ("variables", "rows")

    def __init__(self, variables: Iterable[Var], rows: Iterable = ()):
        """Build a table from rows given as mappings (missing keys mean identity)
        or as tuples aligned with the sorted index set.

        Every row is brought to canonical solved form; a row whose entries
        cannot be solved, or that mentions variables outside the index set,
        is rejected.
        """
        self.variables = _sorted_vars(variables)
        self.rows = frozenset(canonical_row(self.variables, r) for r in rows)

    @classmethod
    def _raw(cls, variables: tuple, rows) -> "Table":
        t = object.__new__(cls)
        t.variables = variables
        t.rows = frozenset(rows)
        return t

    @property
    def is_bottom(self) -> bool:
        return not self.rows

    @property
    def is_top(self) -> bool:
        return not self.variables and bool(self.rows)

    def __eq__(self, other):
        return isinstance(other, Table) and self.variables == other.variables and self.rows == other.rows

    def __hash__(self):
        return hash((self.variables, self.rows))

    def __len__(self):
        return len(self.rows)

    def sorted_rows(self) -> list:
        return sorted(self.rows, key=tuple_key)

    def dicts(self) -> list:
        return [dict(zip(self.variables, r)) for r in self.sorted_rows()]

    def __repr__(self):
        if self.is_top:
            return "Table(TOP)"
        names = ",".join(v.name for v in self.variables)
        if self.is_bottom:
            return f"Table([{names}], BOTTOM)"
        rows = "; ".join(", ".join(map(str, r)) for r in self.sorted_rows())
        return f"Table([{names}], {{{rows}}})"


TOP = Table._raw((), [()])


def bottom(variables: Iterable[Var] = ()) -> Table:
    return Table._raw(_sorted_vars(variables), ())


def canonical_row(variables: tuple, row) -> tuple:
    if isinstance(row, Mapping):
        extra = set(row) - set(variables)
        if extra:
            raise ValueError(f"row binds variables outside the index set: {sorted(v.name for v in extra)}")
        entries = [row.get(v, v) for v in variables]
    else:
        entries = list(row)
        if len(entries) != len(variables):
            raise ValueError(f"row {row} does not match index set of size {len(variables)}")
    stray = variables_of(entries) - set(variables)
    if stray:
        raise ValueError(f"row mentions variables outside the index set: {sorted(v.name for v in stray)}")
    try:
        s = solve((v, t) for v, t in zip(variables, entries) if t != v)
    except UnificationError as e:
        raise ValueError(f"row {entries} has no solved form ({e.reason})") from e
    return tuple(s.get(v, v) for v in variables)


def _equations(variables: tuple, row: tuple):
    return [(v, t) for v, t in zip(variables, row) if t is not v and t != v]


def product(t0: Table, t1: Table) -> Table:
    """Join two tables: every solvable union of a row from each, in solved form.

    Index sets may overlap; shared names coordinate (no renaming apart).
    """
    if not t0.rows or not t1.rows:
        return bottom(t0.variables + t1.variables)
    variables = _sorted_vars(t0.variables + t1.variables)
    shared = [v for v in t0.variables if v in t1.variables]
    i0 = [t0.variables.index(v) for v in shared]
    i1 = [t1.variables.index(v) for v in shared]

    # rows whose shared entries are all ground can only meet rows with equal values
    buckets: dict = defaultdict(list)
    wild = []
    for r in t1.rows:
        key = tuple(r[i] for i in i1)
        if all(k.ground for k in key):
            buckets[key].append(r)
        else:
            wild.append(r)
    all1 = list(t1.rows)

    out = set()
    for r0 in t0.rows:
        eq0 = _equations(t0.variables, r0)
        key = tuple(r0[i] for i in i0)
        cands = buckets.get(key, []) + wild if all(k.ground for k in key) else all1
        for r1 in cands:
            s = solve_pairs(eq0 + _equations(t1.variables, r1))
            if s is not None:
                out.add(tuple(s.get(v, v) for v in variables))
    return Table._raw(variables, out)


def product_all(tables: Iterable[Table]) -> Table:
    # smallest first keeps intermediate tables small; the result is order-independent
    ts = sorted(tables, key=len)
    return reduce(product, ts, TOP)


def filter(r: Relation, args: Sequence[Term]) -> Table:
    """Match each tuple of a ground relation against an argument tuple."""
    args = tuple(args)
    if len(args) != r.arity:
        raise ValueError(f"relation of arity {r.arity} filtered by a {len(args)}-tuple")
    variables = variables_of(args, ordered=True)
    if all(a.ground for a in args):
        return TOP if args in r.tuples else bottom()
    out = set()
    for tup in r.tuples:
        s = match_ground(args, tup)
        if s is not None:
            out.add(tuple(s[v] for v in variables))
    return Table._raw(variables, out)


def project(params: Sequence[Term], t: Table, u: Universe) -> Relation:
    """Ground instances, within Herb_d, of the parameters under each row."""
    params = tuple(params)
    out = set()
    d = u.depth
    for row in t.rows:
        s = dict(zip(t.variables, row))
        inst = tuple(_subst(p, s) for p in params)
        if all(x.ground for x in inst):
            if all(x.depth <= d for x in inst):
                out.add(inst)
        else:
            out.update(instantiate(inst, u))
    return Relation._raw(len(params), frozenset(out))


def project_counting(params: Sequence[Term], t: Table, u: Universe):
    """Like :func:`project`, also returning how many instantiations were clipped."""
    params = tuple(params)
    out = set()
    clipped = 0
    for row in t.rows:
        inst = tuple(_subst(p, dict(zip(t.variables, row))) for p in params)
        clipped += count_clipped(inst, u)
        out.update(instantiate(inst, u))
    return Relation._raw(len(params), frozenset(out)), clipped


def cylinder_table(t: Table, big: Iterable[Var]) -> Table:
    big = _sorted_vars(big)
    if not set(t.variables) <= set(big):
        raise ValueError("cylinder index set must contain the table's index set")
    pos = {v: i for i, v in enumerate(t.variables)}
    rows = (tuple(r[pos[v]] if v in pos else v for v in big) for r in t.rows)
    return Table._raw(big, rows)


def ground_table(t: Table, u: Universe) -> VarRelation:
    rows = set()
    for r in t.rows:
        rows.update(instantiate(r, u))
    return VarRelation._raw(t.variables, frozenset(rows))


def tables_equivalent(t0: Table, t1: Table, u: Universe) -> bool:
    big = set(t0.variables) | set(t1.variables)
    return ground_table(cylinder_table(t0, big), u) == ground_table(cylinder_table(t1, big), u)


def table_cylinder_identity(t: Table, big: Iterable[Var], u: Universe) -> bool:
    """Grounding commutes with cylindrification (tables vs relations)."""
    big = list(big)
    return ground_table(cylinder_table(t, big), u) == rel_cylinder(ground_table(t, u), big, u)
