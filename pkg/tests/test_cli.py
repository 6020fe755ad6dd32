from pathlib import Path

import pytest

from tabsem import tables
from tabsem.cli import EXIT_LAW, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE

ROOT = Path(__file__).resolve().parent.parent
APPMEM = str(ROOT / "programs" / "appmem.pl")
GOLDEN = Path(__file__).resolve().parent / "golden"


def test_example_matches_golden(run_cli):
    code, out = run_cli("example")
    assert code == EXIT_OK
    assert out == (GOLDEN / "example.txt").read_text(encoding="utf-8")
    assert "1 || b    | f(b)" in out
    assert "X || a | f(a) | f(b)" in out


def test_fixpoint_appmem(run_cli):
    code, out = run_cli("fixpoint", APPMEM, "--depth", "2", "--format", "records")
    assert code == EXIT_OK
    assert "% converged: yes" in out
    assert "app/3:" in out and "mem/2:" in out
    assert "  (nil,[nil],[nil])" in out


def test_fixpoint_iteration_cap(run_cli):
    code, out = run_cli("fixpoint", APPMEM, "--max-iters", "1")
    assert code == EXIT_NOT_CONVERGED
    assert "% converged: no" in out


def test_fixpoint_syntax_error(run_cli, tmp_path, capsys):
    bad = tmp_path / "bad.pl"
    bad.write_text("p(a) :- .\n")
    code, _ = run_cli("fixpoint", str(bad))
    assert code == EXIT_USAGE
    assert "bad.pl:1:" in capsys.readouterr().err


def test_fixpoint_with_extern_matches_golden(run_cli):
    code, out = run_cli(
        "fixpoint", str(ROOT / "programs" / "worked_example.pl"),
        "--extern", "p=" + str(ROOT / "programs" / "p.rel"), "--format", "records",
    )
    assert code == EXIT_OK
    assert out == (GOLDEN / "worked_fixpoint.txt").read_text(encoding="utf-8")


def test_query_answers(run_cli):
    code, out = run_cli("query", APPMEM, "mem(X, '.'(a,'.'(b,nil)))", "--depth", "2")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "X || a | b"
    _, out = run_cli("query", APPMEM, "mem(a, [b,a])")
    assert out.splitlines()[-1] == "yes"
    _, out = run_cli("query", APPMEM, "mem(nil, [b,a])")
    assert out.splitlines()[-1] == "no"


@pytest.mark.slow
def test_query_depth_three(run_cli):
    code, out = run_cli("query", APPMEM, "mem(X, '.'(a,'.'(b,nil)))", "--depth", "3")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "X || a | b"


def test_query_unknown_predicate(run_cli):
    code, _ = run_cli("query", APPMEM, "nope(X)")
    assert code == EXIT_USAGE


def test_check_laws_passes(run_cli):
    code, out = run_cli("check-laws", "--seed", "3", "--cases", "40", "--depth", "2")
    assert code == EXIT_OK
    assert "summary: 15 laws, 0 violated" in out


def test_check_laws_seed_changes_instances_not_verdict(run_cli):
    a = run_cli("check-laws", "--seed", "1", "--cases", "30")
    b = run_cli("check-laws", "--seed", "2", "--cases", "30")
    assert a[0] == b[0] == EXIT_OK
    assert a[1] != b[1]


def test_check_laws_reports_broken_product(run_cli, monkeypatch):
    real = tables.product

    def broken(t0, t1):
        r = real(t0, t1)
        # drop one row whenever the left operand has more rows than the right
        if len(t0) > len(t1) and r.rows:
            return tables.Table._raw(r.variables, r.sorted_rows()[1:])
        return r

    monkeypatch.setattr(tables, "product", broken)
    code, out = run_cli("check-laws", "--cases", "100", "--law", "product-commutative")
    assert code == EXIT_LAW
    assert "counterexample for product-commutative:" in out
    assert "FAIL" in out


def test_unknown_law(run_cli):
    code, _ = run_cli("check-laws", "--law", "no-such-law")
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ("example",),
        ("fixpoint", APPMEM, "--depth", "2"),
        ("query", APPMEM, "app(X,Y,[a])"),
        ("check-laws", "--seed", "5", "--cases", "25"),
    ],
)
def test_byte_identical_reruns(run_cli, argv):
    assert run_cli(*argv) == run_cli(*argv)
