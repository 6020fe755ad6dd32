from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from tabsem.terms import (
    Fn,
    Signature,
    UnificationError,
    Universe,
    Var,
    apply,
    count_clipped,
    enumerate_ground,
    ground_instances,
    solve,
    unify,
    unify_tuples,
    variables_of,
)

from conftest import A, B, X, Y, Z, equations, f, terms


def brute_herbrand(constants, functions, d):
    """Every ground term of depth <= d, by naive fixed-point closure."""
    level = {Fn(c) for c in constants}
    for _ in range(d):
        new = set(level)
        for name, n in functions.items():
            for args in product(level, repeat=n):
                new.add(Fn(name, args))
        level = new
    return level


def depth(t):
    return 0 if not t.args else 1 + max(depth(a) for a in t.args)


def test_variables_of():
    assert variables_of(Fn("f", (X, Fn("g", (Y, X))))) == {X, Y}
    assert variables_of(A) == frozenset()
    assert variables_of((X, f(Y))) == {X, Y}
    assert variables_of((Z, f(Y), X), ordered=True) == (X, Y, Z)


def test_apply():
    assert apply({X: A}, Fn("f", (X, Y))) == Fn("f", (A, Y))
    t = Fn("f", (X, Y))
    assert apply({}, t) is t
    assert apply({Y: B, Z: f(B)}, (f(Y), Z)) == (f(B), f(B))


def test_solve_examples():
    assert solve([(X, f(Y)), (Y, A)]) == {X: f(A), Y: A}
    with pytest.raises(UnificationError) as e:
        solve([(X, f(X))])
    assert e.value.reason == "occurs"
    # union of the rows {x=a, y=b} and {x=a, z=b}
    assert solve([(X, A), (Y, B), (X, A), (Z, B)]) == {X: A, Y: B, Z: B}


def test_unify_examples():
    assert unify(X, X) == {}
    with pytest.raises(UnificationError) as e:
        unify(f(X), Fn("g", (X,)))
    assert e.value.reason == "clash"
    assert unify_tuples((X, f(Y)), (f(B), f(A))) == {X: f(B), Y: A}


def test_variable_classes_keep_smallest_name():
    assert solve([(Z, Y), (Y, X)]) == {Y: X, Z: X}
    assert solve([(X, f(Z)), (X, f(Y))]) == {X: f(Y), Z: Y}


def test_enumerate_ground_examples():
    assert enumerate_ground(Universe.of(["a"], {}, 2)) == [A]
    assert enumerate_ground(Universe.of(["a", "b"], {"f": 1}, 1)) == [A, B, f(A), f(B)]
    herb2 = enumerate_ground(Universe.of(["a", "b"], {"f": 1}, 2))
    oracle = brute_herbrand(["a", "b"], {"f": 1}, 2)
    assert set(herb2) == oracle and len(herb2) == len(oracle) == 6
    assert herb2[-2:] == [f(f(A)), f(f(B))]


def test_enumerate_ground_needs_constant():
    with pytest.raises(ValueError):
        enumerate_ground(Universe.of([], {"f": 1}, 1))


@pytest.mark.parametrize("d", [0, 1, 2])
def test_enumerate_against_closure(d):
    consts, funcs = ["nil", "a"], {".": 2, "s": 1}
    got = enumerate_ground(Universe.of(consts, funcs, d))
    assert len(got) == len(set(got))
    assert set(got) == brute_herbrand(consts, funcs, d)
    assert [depth(t) for t in got] == sorted(depth(t) for t in got)


def test_enumerate_closed_under_subterms():
    herb = set(enumerate_ground(Universe.of(["a", "b"], {"g": 2, "f": 1}, 2)))
    for t in herb:
        assert set(t.args) <= herb


def test_ground_instances(u_ab_f1):
    assert ground_instances((A, B), u_ab_f1) == {(A, B)}
    assert ground_instances((X,), u_ab_f1) == {(A,), (B,), (f(A),), (f(B),)}
    # brute force: instantiate over Herb_1, then drop anything deeper than 1
    herb = enumerate_ground(u_ab_f1)
    oracle = {(f(v),) for v in herb if depth(f(v)) <= 1}
    assert ground_instances((f(X),), u_ab_f1) == oracle == {(f(A),), (f(B),)}


@pytest.mark.parametrize("tup", [(X,), (f(X), Y), (f(f(X)), X), (Fn("f", (f(Y),)), Y, A), (f(A),)])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_ground_instances_match_naive_clipping(tup, d):
    u = Universe.of(["a", "b"], {"f": 1}, d)
    herb = enumerate_ground(u)
    vs = sorted(variables_of(tup), key=lambda v: v.name)
    naive = set()
    total = 0
    for values in product(herb, repeat=len(vs)):
        total += 1
        inst = apply(dict(zip(vs, values)), tup)
        if all(depth(t) <= d for t in inst):
            naive.add(inst)
    assert ground_instances(tup, u) == naive
    kept = sum(1 for values in product(herb, repeat=len(vs))
               if all(depth(t) <= d for t in apply(dict(zip(vs, values)), tup)))
    assert count_clipped(tup, u) == total - kept


@given(equations)
def test_solution_unifies_every_equation(eqs):
    try:
        s = solve(eqs)
    except UnificationError:
        return
    for lhs, rhs in eqs:
        assert apply(s, lhs) == apply(s, rhs)


@given(equations)
def test_solved_form_is_idempotent_and_occurs_free(eqs):
    try:
        s = solve(eqs)
    except UnificationError:
        return
    for v, t in s.items():
        assert v not in variables_of(t)
        assert not (variables_of(t) & set(s))
    for lhs, _ in eqs:
        assert apply(s, apply(s, lhs)) == apply(s, lhs)


@given(st.lists(st.tuples(terms, terms), max_size=4), st.randoms(use_true_random=False))
def test_solve_is_order_insensitive(eqs, rnd):
    shuffled = [(r, l) if rnd.random() < 0.5 else (l, r) for l, r in eqs]
    rnd.shuffle(shuffled)
    try:
        s0 = solve(eqs)
    except UnificationError:
        with pytest.raises(UnificationError):
            solve(shuffled)
        return
    assert solve(shuffled) == s0


def test_solve_all_permutations_identical():
    eqs = [(X, f(Y)), (Z, f(X)), (Y, Y), (Fn("g", (Y, Z)), Fn("g", (Y, Z)))]
    results = {tuple(sorted((k.name, str(v)) for k, v in solve(p).items())) for p in permutations(eqs)}
    assert len(results) == 1


def test_signature_rejects_constant_function_clash():
    with pytest.raises(ValueError):
        Signature(frozenset({"f"}), {"f": 1})
