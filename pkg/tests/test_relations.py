import random

import pytest

from tabsem import laws
from tabsem.relations import (
    Relation,
    VarRelation,
    correspond,
    herbrand_to_relational,
    interpretation_le,
    rel_cylinder,
    rel_project,
    relational_to_herbrand,
)
from tabsem.terms import Atom, Fn, Signature

from conftest import A, B, X, Y, Z, f

SIG = Signature(frozenset({"a", "b"}), {"f": 1}, {"p": 2, "q": 1})
M_P = [(A, f(B)), (f(A), B), (f(A), f(B)), (f(B), f(A))]


def test_rel_project():
    r = VarRelation([X, Y], [{X: A, Y: B}, {X: A, Y: Fn("c")}])
    assert rel_project(r, [X, Y]) == r
    assert rel_project(r, []).rows == {()}
    assert rel_project(r, [X]) == VarRelation([X], [{X: A}])
    with pytest.raises(ValueError):
        rel_project(r, [Z])


def test_rel_cylinder(u_ab_f1):
    r = VarRelation([X], [{X: A}])
    assert rel_cylinder(r, [X], u_ab_f1) == r
    assert len(rel_cylinder(VarRelation([X]), [X, Y], u_ab_f1)) == 0
    assert len(rel_cylinder(r, [X, Y], u_ab_f1)) == 4
    with pytest.raises(ValueError):
        rel_cylinder(VarRelation([X, Y]), [X], u_ab_f1)


def test_project_of_cylinder_is_identity():
    rng = random.Random(11)
    for _ in range(100):
        u = laws.random_universe(rng, 2)
        herb = u.terms()
        vs = [v for v in (X, Y) if rng.random() < 0.6]
        rows = [{v: rng.choice(herb) for v in vs} for _ in range(rng.randint(0, 4))]
        r = VarRelation(vs, rows)
        big = set(vs) | {Z}
        assert rel_project(rel_cylinder(r, big, u), vs) == r


def test_herbrand_to_relational():
    empty = herbrand_to_relational(frozenset(), SIG)
    assert empty == {"p": Relation(2), "q": Relation(1)}
    i = frozenset({Atom("p", (A, f(B))), Atom("p", (f(A), B))})
    r = herbrand_to_relational(i, SIG)
    assert r["p"] == Relation(2, [(A, f(B)), (f(A), B)])
    assert relational_to_herbrand(r) == i


def test_herbrand_to_relational_errors():
    with pytest.raises(ValueError):
        herbrand_to_relational({Atom("zz", (A,))}, SIG)
    with pytest.raises(ValueError):
        herbrand_to_relational({Atom("q", (A, B))}, SIG)


def test_relational_round_trip():
    r = {"p": Relation(2, M_P), "q": Relation(1, [(A,)])}
    assert herbrand_to_relational(relational_to_herbrand(r), SIG) == r
    assert relational_to_herbrand({"p": Relation(2), "q": Relation(1)}) == frozenset()


def test_correspond():
    assert correspond(frozenset(), {"p": Relation(2), "q": Relation(1)})
    assert not correspond({Atom("q", (A,))}, {"p": Relation(2), "q": Relation(1, [(B,)])})
    atoms = {Atom("p", t) for t in M_P}
    assert correspond(atoms, {"p": Relation(2, M_P)})


def test_order_matches_inclusion():
    rng = random.Random(5)
    u = laws.random_universe(rng, 1)
    for _ in range(100):
        r0 = {"p": laws.random_relation(rng, u, 2), "q": laws.random_relation(rng, u, 1)}
        r1 = {"p": laws.random_relation(rng, u, 2), "q": laws.random_relation(rng, u, 1)}
        if rng.random() < 0.5:
            r1 = {k: r0[k] | r1[k] for k in r0}
        assert interpretation_le(r0, r1) == (relational_to_herbrand(r0) <= relational_to_herbrand(r1))


def test_relation_rejects_nonground():
    with pytest.raises(ValueError):
        Relation(1, [(X,)])
    with pytest.raises(ValueError):
        Relation(2, [(A,)])
