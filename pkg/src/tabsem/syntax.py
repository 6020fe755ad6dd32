"""Pure-Prolog clause syntax, the procedural program form, and conversions.

Grammar (Edinburgh flavoured, no operators)::

    program := clause*
    clause  := atom '.' | atom ':-' atom (',' atom)* '.'
    atom    := name [ '(' term (',' term)* ')' ]
    term    := VARIABLE | name [ '(' term (',' term)* ')' ] | list
    list    := '[' ']' | '[' term (',' term)* [ '|' term ] ']'

Names start with a lowercase letter or digit, or are single-quoted. Variables
start with an uppercase letter or underscore; each bare ``_`` is a fresh
variable. ``[]`` reads as ``nil`` and ``[H|T]`` as ``'.'(H, T)``. ``%`` starts a
line comment.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from tabsem.terms import Atom, Fn, Signature, Term, Var, atom_key, tuple_key

log = logging.getLogger(__name__)

NIL = "nil"
CONS = "."


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


class ArityError(ParseError):
    """A predicate or function symbol used with two different arities."""


# ---------------------------------------------------------------------------
# abstract syntax


@dataclass(frozen=True)
class HornClause:
    head: Atom
    body: frozenset = frozenset()

    def __str__(self):
        return format_clause(self)


@dataclass(frozen=True)
class Clause:
    """A procedural clause: parameter tuple and a body (set of calls)."""

    params: tuple
    body: frozenset = frozenset()


Call = Atom


@dataclass(frozen=True)
class ProceduralProgram:
    """Maps every procedure symbol to its procedure (a frozenset of Clauses).

    ``arities`` covers every symbol in ``procedures``; symbols that are only
    called carry an empty procedure.
    """

    procedures: Mapping[str, frozenset] = field(default_factory=dict)
    arities: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "procedures", dict(self.procedures))
        object.__setattr__(self, "arities", dict(self.arities))
        if self.procedures.keys() != self.arities.keys():
            raise ValueError("procedures and arities must have the same symbols")
        for p, proc in self.procedures.items():
            for cl in proc:
                if len(cl.params) != self.arities[p]:
                    raise ValueError(f"clause of {p} has {len(cl.params)} parameters, expected {self.arities[p]}")
                for call in cl.body:
                    if self.arities.get(call.pred) != len(call.args):
                        raise ValueError(f"call {call} does not match a procedure symbol of that arity")

    @property
    def predicates(self) -> tuple:
        return tuple(sorted(self.procedures))

    def defined(self) -> frozenset:
        return frozenset(p for p, proc in self.procedures.items() if proc)

    def undefined(self) -> frozenset:
        return frozenset(p for p, proc in self.procedures.items() if not proc)

    def with_predicates(self, arities: Mapping[str, int]) -> "ProceduralProgram":
        """Extend Pred by extra (external) symbols with empty procedures."""
        procs = dict(self.procedures)
        ar = dict(self.arities)
        for p, n in arities.items():
            if p in ar and ar[p] != n:
                raise ArityError(f"predicate {p} used with arities {ar[p]} and {n}")
            ar[p] = n
            procs.setdefault(p, frozenset())
        return ProceduralProgram(procs, ar)


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<neck>:-)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z0-9][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.|'')*')
  | (?P<punct>[(),.\[\]|])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    line, line_start = 1, 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind != "ws":
            if kind == "quoted":
                kind = "name"
                value = value[1:-1].replace("''", "'").replace("\\'", "'").replace("\\\\", "\\")
            out.append((kind, value, line, col))
        nl = value.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    out.append(("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.fresh = 0
        self.pred_arity: dict = {}
        self.fn_arity: dict = {}

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = repr(value) if value is not None else kind
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], tok[3])
        self.i += 1
        return tok

    def at(self, value) -> bool:
        tok = self.toks[self.i]
        return tok[0] == "punct" and tok[1] == value

    def program(self) -> list:
        clauses = []
        while self.peek()[0] != "eof":
            clauses.append(self.clause())
        return clauses

    def clause(self) -> HornClause:
        head = self.atom()
        body = []
        if self.peek()[0] == "neck":
            self.take("neck")
            body.append(self.atom())
            while self.at(","):
                self.take("punct", ",")
                body.append(self.atom())
        self.take("punct", ".")
        body_set = frozenset(body)
        if len(body_set) < len(body):
            log.warning("duplicate body atoms collapsed in clause for %s", head.pred)
        return HornClause(head, body_set)

    def goal(self) -> list:
        atoms = [self.atom()]
        while self.at(","):
            self.take("punct", ",")
            atoms.append(self.atom())
        if self.at("."):
            self.take("punct", ".")
        self.take("eof")
        return atoms

    def atom(self) -> Atom:
        tok = self.take("name")
        args = self.args() if self.at("(") else ()
        prev = self.pred_arity.setdefault(tok[1], len(args))
        if prev != len(args):
            raise ArityError(f"predicate {tok[1]} used with arities {prev} and {len(args)}", tok[2], tok[3])
        return Atom(tok[1], args)

    def args(self) -> tuple:
        self.take("punct", "(")
        out = [self.term()]
        while self.at(","):
            self.take("punct", ",")
            out.append(self.term())
        self.take("punct", ")")
        return tuple(out)

    def term(self) -> Term:
        tok = self.peek()
        if tok[0] == "var":
            self.i += 1
            if tok[1] == "_":
                self.fresh += 1
                return Var(f"_G{self.fresh}")
            return Var(tok[1])
        if tok[0] == "punct" and tok[1] == "[":
            return self.list_term()
        tok = self.take("name")
        args = self.args() if self.at("(") else ()
        prev = self.fn_arity.setdefault(tok[1], len(args))
        if prev != len(args):
            raise ArityError(f"function {tok[1]} used with arities {prev} and {len(args)}", tok[2], tok[3])
        return Fn(tok[1], args)

    def list_term(self) -> Term:
        self.take("punct", "[")
        if self.at("]"):
            self.take("punct", "]")
            return Fn(NIL)
        items = [self.term()]
        while self.at(","):
            self.take("punct", ",")
            items.append(self.term())
        tail = Fn(NIL)
        if self.at("|"):
            self.take("punct", "|")
            tail = self.term()
        self.take("punct", "]")
        for x in reversed(items):
            tail = Fn(CONS, (x, tail))
        self.fn_arity.setdefault(CONS, 2)
        if self.fn_arity[CONS] != 2:
            raise ArityError("function '.' must have arity 2")
        return tail


def parse_program(text: str) -> frozenset:
    """Parse source text into a clausal sentence (a frozenset of HornClauses)."""
    return frozenset(_Parser(text).program())


def parse_goal(text: str) -> frozenset:
    """Parse a goal such as ``app(X, Y, [a])`` into a set of atoms."""
    return frozenset(_Parser(text).goal())


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.take("eof")
    return t


def parse_tuple(text: str) -> tuple:
    """Parse a parenthesized tuple ``(t0, t1, ...)``; ``()`` is the empty tuple."""
    p = _Parser(text)
    p.take("punct", "(")
    out = []
    if not p.at(")"):
        out.append(p.term())
        while p.at(","):
            p.take("punct", ",")
            out.append(p.term())
    p.take("punct", ")")
    p.take("eof")
    return tuple(out)


# ---------------------------------------------------------------------------
# printing

_PLAIN_NAME = re.compile(r"[a-z][A-Za-z0-9_]*|[0-9]+")


def format_name(name: str) -> str:
    if _PLAIN_NAME.fullmatch(name):
        return name
    return "'" + name.replace("'", "''") + "'"


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return format_name(t.functor)
    if t.functor == CONS and len(t.args) == 2:
        items = []
        while isinstance(t, Fn) and t.functor == CONS and len(t.args) == 2:
            items.append(format_term(t.args[0]))
            t = t.args[1]
        if isinstance(t, Fn) and t.functor == NIL and not t.args:
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + format_term(t) + "]"
    return format_name(t.functor) + "(" + ",".join(format_term(a) for a in t.args) + ")"


def format_tuple(ts) -> str:
    return "(" + ",".join(format_term(t) for t in ts) + ")"


def format_atom(a: Atom) -> str:
    if not a.args:
        return format_name(a.pred)
    return format_name(a.pred) + format_tuple(a.args)


def format_clause(c: HornClause) -> str:
    if not c.body:
        return format_atom(c.head) + "."
    body = sorted(c.body, key=atom_key)
    return format_atom(c.head) + " :- " + ", ".join(format_atom(a) for a in body) + "."


def format_program(s: Iterable[HornClause]) -> str:
    """Canonical source text: clauses sorted by head, body atoms sorted."""
    clauses = sorted(s, key=lambda c: (atom_key(c.head), [atom_key(a) for a in sorted(c.body, key=atom_key)]))
    return "".join(format_clause(c) + "\n" for c in clauses)


# ---------------------------------------------------------------------------
# clausal <-> procedural


def sentence_arities(s: Iterable[HornClause]) -> dict:
    ar: dict = {}
    for c in s:
        for a in (c.head, *c.body):
            prev = ar.setdefault(a.pred, len(a.args))
            if prev != len(a.args):
                raise ArityError(f"predicate {a.pred} used with arities {prev} and {len(a.args)}")
    return ar


def to_procedural(s: Iterable[HornClause]) -> ProceduralProgram:
    s = list(s)
    ar = sentence_arities(s)
    procs: dict = {p: set() for p in ar}
    for c in s:
        procs[c.head.pred].add(Clause(c.head.args, frozenset(c.body)))
    return ProceduralProgram({p: frozenset(cs) for p, cs in procs.items()}, ar)


def to_clausal(p: ProceduralProgram) -> frozenset:
    return frozenset(
        HornClause(Atom(sym, cl.params), cl.body) for sym, proc in p.procedures.items() for cl in proc
    )


def program_terms(p: ProceduralProgram):
    for proc in p.procedures.values():
        for cl in proc:
            yield from cl.params
            for call in cl.body:
                yield from call.args


def infer_signature(p: ProceduralProgram) -> Signature:
    sig = Signature.of_terms(program_terms(p))
    return Signature(sig.constants, sig.functions, p.arities)


def rename_predicates(p: ProceduralProgram, rho: Mapping[str, str]) -> ProceduralProgram:
    """Rename procedure symbols by a bijection on Pred (missing symbols stay fixed)."""
    full = {q: rho.get(q, q) for q in p.procedures}
    extra = set(rho) - set(p.procedures)
    if extra:
        raise ValueError(f"renaming mentions symbols outside Pred: {sorted(extra)}")
    if len(set(full.values())) != len(full):
        raise ValueError("renaming is not injective")
    if set(full.values()) != set(full):
        raise ValueError("renaming must be a bijection on Pred")
    for q, r in full.items():
        if p.arities[q] != p.arities[r]:
            raise ValueError(f"renaming {q} -> {r} does not preserve arity")

    def call(a: Atom) -> Atom:
        return Atom(full[a.pred], a.args)

    procs = {
        full[q]: frozenset(Clause(cl.params, frozenset(call(a) for a in cl.body)) for cl in proc)
        for q, proc in p.procedures.items()
    }
    return ProceduralProgram(procs, {full[q]: n for q, n in p.arities.items()})


def format_procedural(p: ProceduralProgram) -> str:
    """Render in the brace notation ``{app{(nil,Y,Y) :- {}, ...}, mem{...}}``."""
    parts = []
    for sym in sorted(p.procedures):
        clauses = sorted(
            p.procedures[sym],
            key=lambda cl: (tuple_key(cl.params), [atom_key(a) for a in sorted(cl.body, key=atom_key)]),
        )
        rendered = []
        for cl in clauses:
            body = ",".join(format_atom(a) for a in sorted(cl.body, key=atom_key))
            rendered.append(f"{format_tuple(cl.params)} :- {{{body}}}")
        parts.append(f"{format_name(sym)}{{{', '.join(rendered)}}}")
    return "{" + ", ".join(parts) + "}"
