"""Text renderings of tables, relations and interpretations.

Relation dump: one tuple per line in parenthesized term syntax, e.g.
``(a,f(b))``; lines starting with ``%`` are comments. An interpretation is a
sequence of ``symbol/arity:`` headers, each followed by its indented tuples.
Everything is sorted so output is diffable.
"""

from __future__ import annotations

from typing import Mapping

from tabsem.relations import Relation
from tabsem.syntax import ParseError, format_name, format_term, format_tuple, parse_tuple
from tabsem.tables import Table


def _transposed(labels: list, columns: list) -> str:
    """Transposed layout: one line per label, one column per tuple."""
    cells = [[format_term(t) for t in col] for col in columns]
    lw = max(len(x) for x in labels)
    widths = [max(len(c) for c in col) for col in cells]
    lines = []
    for i, label in enumerate(labels):
        row = " | ".join(col[i].ljust(w) for col, w in zip(cells, widths))
        lines.append(f"{label.ljust(lw)} || {row}".rstrip())
    return "\n".join(lines)


def render_table(t: Table, fmt: str = "pretty") -> str:
    if fmt == "records":
        if t.is_bottom:
            return ""
        return "\n".join(
            " ".join(f"{v.name}={format_term(x)}" for v, x in zip(t.variables, row)) for row in t.sorted_rows()
        )
    if t.is_bottom:
        return "⊥"
    if t.is_top:
        return "⊤"
    return _transposed([v.name for v in t.variables], t.sorted_rows())


def render_relation(r: Relation, fmt: str = "pretty") -> str:
    if fmt == "records" or r.arity == 0 or not r.tuples:
        return "\n".join(format_tuple(t) for t in r.sorted())
    return _transposed([str(i) for i in range(r.arity)], r.sorted())


def render_interpretation(interp: Mapping[str, Relation], fmt: str = "records") -> str:
    out = []
    for sym in sorted(interp):
        rel = interp[sym]
        out.append(f"{format_name(sym)}/{rel.arity}:")
        body = render_relation(rel, fmt)
        out.extend("  " + line for line in body.splitlines())
    return "\n".join(out)


def dump_relation(r: Relation) -> str:
    return "".join(format_tuple(t) + "\n" for t in r.sorted())


def load_relation(text: str, arity: int = None) -> Relation:
    tuples = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        try:
            tup = parse_tuple(line)
        except ParseError as e:
            raise ParseError(f"line {n}: {e}") from e
        if arity is None:
            arity = len(tup)
        if len(tup) != arity:
            raise ParseError(f"tuple of length {len(tup)}, expected {arity}", n, 1)
        if not all(x.ground for x in tup):
            raise ParseError("relation tuples must be ground", n, 1)
        tuples.append(tup)
    if arity is None:
        raise ValueError("cannot infer the arity of an empty relation")
    return Relation(arity, tuples)


def dump_interpretation(interp: Mapping[str, Relation]) -> str:
    return render_interpretation(interp, "records") + "\n"


def load_interpretation(text: str) -> dict:
    out: dict = {}
    sym = None
    arity = 0
    lines: list = []

    def flush():
        if sym is not None:
            out[sym] = load_relation("\n".join(lines), arity)

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.endswith(":") and "/" in line:
            flush()
            head = line[:-1]
            name, _, ar = head.rpartition("/")
            if name.startswith("'") and name.endswith("'"):
                name = name[1:-1].replace("''", "'")
            sym, arity, lines = name, int(ar), []
        elif sym is None:
            raise ParseError("tuple before any symbol/arity header", n, 1)
        else:
            lines.append(line)
    flush()
    return out
