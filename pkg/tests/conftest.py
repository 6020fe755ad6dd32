import io

import pytest
from hypothesis import settings, strategies as st

from tabsem.terms import Fn, Signature, Universe, Var

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

A, B = Fn("a"), Fn("b")
W, X, Y, Z = Var("W"), Var("X"), Var("Y"), Var("Z")


def f(t):
    return Fn("f", (t,))


def g(t0, t1):
    return Fn("g", (t0, t1))


variables = st.sampled_from([W, X, Y, Z])
constants = st.sampled_from([A, B])
terms = st.recursive(
    variables | constants,
    lambda sub: st.builds(f, sub) | st.builds(g, sub, sub),
    max_leaves=6,
)
equations = st.lists(st.tuples(terms, terms), max_size=4)


@pytest.fixture
def u_ab_f1():
    return Universe(Signature(frozenset({"a", "b"}), {"f": 1}), 1)


@pytest.fixture
def u_ab_f2():
    return Universe(Signature(frozenset({"a", "b"}), {"f": 1}), 2)


@pytest.fixture
def run_cli():
    from tabsem.cli import main

    def run(*argv):
        out = io.StringIO()
        code = main(list(argv), out=out)
        return code, out.getvalue()

    return run


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = getattr(sys.modules.get("test_acceptance"), "VERDICTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
