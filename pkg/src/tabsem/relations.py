"""Ground relations and the Herbrand/relational correspondence."""

from __future__ import annotations

from itertools import product as cartesian
from typing import Iterable, Mapping

from tabsem.terms import Atom, Signature, Universe, Var, tuple_key


class Relation:
    """An n-ary relation: a set of n-tuples of ground terms."""

    __slots__ = ("arity", "tuples")

    def __init__(self, arity: int, tuples: Iterable[tuple] = ()):
        self.arity = arity
        self.tuples = frozenset(tuple(t) for t in tuples)
        for t in self.tuples:
            if len(t) != arity:
                raise ValueError(f"tuple {t} does not have arity {arity}")
            if not all(x.ground for x in t):
                raise ValueError(f"tuple {t} is not ground")

    @classmethod
    def _raw(cls, arity: int, tuples: frozenset) -> "Relation":
        r = object.__new__(cls)
        r.arity = arity
        r.tuples = tuples
        return r

    def __eq__(self, other):
        return isinstance(other, Relation) and self.arity == other.arity and self.tuples == other.tuples

    def __hash__(self):
        return hash((self.arity, self.tuples))

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, t):
        return tuple(t) in self.tuples

    def __le__(self, other: "Relation"):
        return self.tuples <= other.tuples

    def __or__(self, other: "Relation") -> "Relation":
        if other.arity != self.arity:
            raise ValueError("arity mismatch in union")
        return Relation._raw(self.arity, self.tuples | other.tuples)

    def sorted(self) -> list:
        return sorted(self.tuples, key=tuple_key)

    def __repr__(self):
        body = ", ".join("(" + ", ".join(map(str, t)) + ")" for t in self.sorted())
        return f"Relation({self.arity}, {{{body}}})"


class VarRelation:
    """A relation whose tuples are indexed by a set of variables.

    ``variables`` is name-sorted; each row lists ground values in that order.
    """

    __slots__ = ("variables", "rows")

    def __init__(self, variables: Iterable[Var], rows: Iterable = ()):
        self.variables = tuple(sorted(set(variables), key=lambda v: v.name))
        normalized = set()
        for row in rows:
            if isinstance(row, Mapping):
                row = tuple(row[v] for v in self.variables)
            row = tuple(row)
            if len(row) != len(self.variables):
                raise ValueError(f"row {row} does not match index set {self.variables}")
            if not all(x.ground for x in row):
                raise ValueError(f"row {row} is not ground")
            normalized.add(row)
        self.rows = frozenset(normalized)

    @classmethod
    def _raw(cls, variables: tuple, rows: frozenset) -> "VarRelation":
        r = object.__new__(cls)
        r.variables = variables
        r.rows = rows
        return r

    def __eq__(self, other):
        return isinstance(other, VarRelation) and self.variables == other.variables and self.rows == other.rows

    def __hash__(self):
        return hash((self.variables, self.rows))

    def __len__(self):
        return len(self.rows)

    def dicts(self) -> list:
        return [dict(zip(self.variables, r)) for r in sorted(self.rows, key=tuple_key)]

    def __and__(self, other: "VarRelation") -> "VarRelation":
        if other.variables != self.variables:
            raise ValueError("intersection needs identical index sets")
        return VarRelation._raw(self.variables, self.rows & other.rows)

    def __repr__(self):
        names = ",".join(v.name for v in self.variables)
        return f"VarRelation([{names}], {len(self.rows)} rows)"


def rel_project(r: VarRelation, sub: Iterable[Var]) -> VarRelation:
    """Restrict every tuple to ``sub``; duplicates merge."""
    sub = set(sub)
    if not sub <= set(r.variables):
        raise ValueError(f"{sorted(v.name for v in sub)} is not a subset of the index set")
    keep = tuple(v for v in r.variables if v in sub)
    idx = [r.variables.index(v) for v in keep]
    return VarRelation._raw(keep, frozenset(tuple(row[i] for i in idx) for row in r.rows))


def rel_cylinder(r: VarRelation, big: Iterable[Var], u: Universe) -> VarRelation:
    """Greatest relation on ``big`` over Herb_d whose projection onto r's index set is r."""
    big = tuple(sorted(set(big), key=lambda v: v.name))
    if not set(r.variables) <= set(big):
        raise ValueError("cylinder index set must contain the relation's index set")
    fresh = [v for v in big if v not in r.variables]
    pos = {v: i for i, v in enumerate(r.variables)}
    fpos = {v: i for i, v in enumerate(fresh)}
    herb = u.terms()
    rows = set()
    for row in r.rows:
        for extra in cartesian(herb, repeat=len(fresh)):
            rows.add(tuple(row[pos[v]] if v in pos else extra[fpos[v]] for v in big))
    return VarRelation._raw(big, frozenset(rows))


# ---------------------------------------------------------------------------
# interpretations

# A Herbrand interpretation is a frozenset of ground atoms; a relational
# interpretation is a dict from predicate symbol to Relation.


def herbrand_to_relational(i: Iterable[Atom], sig: Signature) -> dict:
    out = {p: set() for p in sig.predicates}
    for a in i:
        if a.pred not in sig.predicates:
            raise ValueError(f"unknown predicate symbol {a.pred}")
        if len(a.args) != sig.predicates[a.pred]:
            raise ValueError(f"{a.pred} has arity {sig.predicates[a.pred]}, atom has {len(a.args)}")
        out[a.pred].add(a.args)
    return {p: Relation(sig.predicates[p], ts) for p, ts in out.items()}


def relational_to_herbrand(r: Mapping[str, Relation]) -> frozenset:
    return frozenset(Atom(p, t) for p, rel in r.items() for t in rel.tuples)


def correspond(i: Iterable[Atom], r: Mapping[str, Relation]) -> bool:
    sig = Signature(predicates={p: rel.arity for p, rel in r.items()})
    try:
        return herbrand_to_relational(i, sig) == dict(r)
    except ValueError:
        return False


def interpretation_le(r0: Mapping[str, Relation], r1: Mapping[str, Relation]) -> bool:
    """Componentwise inclusion of relational interpretations."""
    return r0.keys() == r1.keys() and all(r0[p] <= r1[p] for p in r0)


def empty_interpretation(predicates: Mapping[str, int]) -> dict:
    return {p: Relation(n) for p, n in predicates.items()}
