"""First-order terms, solved forms and the depth-bounded Herbrand universe."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Iterator, Mapping, Sequence, Union


class Term:
    __slots__ = ()


class Var(Term):
    __slots__ = ("name", "_hash")

    ground = False
    depth = 0

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Var"):
        return self.name < other.name

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name


class Fn(Term):
    """A compound term; constants are compounds with no arguments."""

    __slots__ = ("functor", "args", "ground", "depth", "_hash", "_key")

    def __init__(self, functor: str, args: Sequence[Term] = ()):
        self.functor = functor
        self.args = tuple(args)
        self.ground = all(a.ground for a in self.args)
        self.depth = 1 + max(a.depth for a in self.args) if self.args else 0
        self._hash = hash((functor, self.args))
        self._key = None

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Fn)
            and self._hash == other._hash
            and self.functor == other.functor
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return f"Fn({self.functor!r})"
        return f"Fn({self.functor!r}, {list(self.args)!r})"

    def __str__(self):
        from tabsem.syntax import format_term

        return format_term(self)


TermTuple = tuple  # tuple[Term, ...]
Substitution = dict  # dict[Var, Term], idempotent, no identity entries


def const(name: str) -> Fn:
    return Fn(name)


def term_key(t: Term):
    """Total order on terms: variables first, then by depth, functor, arguments."""
    if isinstance(t, Var):
        return (-1, t.name)
    if t._key is None:
        t._key = (t.depth, t.functor, len(t.args), tuple(term_key(a) for a in t.args))
    return t._key


def tuple_key(ts: Sequence[Term]):
    return tuple(term_key(t) for t in ts)


@dataclass(frozen=True)
class Atom:
    """A predicate symbol applied to an argument tuple; used for calls and heads."""

    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        from tabsem.syntax import format_atom

        return format_atom(self)


def atom_key(a: Atom):
    return (a.pred, len(a.args), tuple_key(a.args))


# ---------------------------------------------------------------------------
# variables and substitution


def _collect_vars(t: Term, seen: dict) -> None:
    if isinstance(t, Var):
        seen.setdefault(t, None)
    elif not t.ground:
        for a in t.args:
            _collect_vars(a, seen)


def variables_of(t: Union[Term, Sequence[Term], Atom], ordered: bool = False):
    """Variables occurring in a term, tuple of terms or atom.

    Returns a frozenset, or a name-sorted tuple when ``ordered`` is set.
    """
    seen: dict = {}
    if isinstance(t, Atom):
        t = t.args
    if isinstance(t, Term):
        _collect_vars(t, seen)
    else:
        for x in t:
            _collect_vars(x, seen)
    if ordered:
        return tuple(sorted(seen, key=lambda v: v.name))
    return frozenset(seen)


def _subst(t: Term, s: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return s.get(t, t)
    if t.ground:
        return t
    return Fn(t.functor, [_subst(a, s) for a in t.args])


def apply(s: Mapping[Var, Term], t):
    """Simultaneous substitution over a term, a tuple of terms or an atom."""
    if not s:
        return t
    if isinstance(t, Term):
        return _subst(t, s)
    if isinstance(t, Atom):
        return Atom(t.pred, tuple(_subst(a, s) for a in t.args))
    return tuple(_subst(a, s) for a in t)


# ---------------------------------------------------------------------------
# unification


class UnificationError(Exception):
    """No solved form exists. ``reason`` is ``"clash"`` or ``"occurs"``."""

    def __init__(self, reason: str, lhs: Term = None, rhs: Term = None):
        self.reason = reason
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{reason}: {lhs} = {rhs}")


@dataclass(frozen=True)
class TermEquation:
    lhs: Term
    rhs: Term


def _walk(t: Term, b: dict) -> Term:
    while isinstance(t, Var):
        nxt = b.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


def _occurs(v: Var, t: Term, b: dict) -> bool:
    stack = [t]
    while stack:
        x = _walk(stack.pop(), b)
        if isinstance(x, Var):
            if x == v:
                return True
        elif not x.ground:
            stack.extend(x.args)
    return False


def _resolve(t: Term, b: dict) -> Term:
    t = _walk(t, b)
    if isinstance(t, Var) or t.ground:
        return t
    return Fn(t.functor, [_resolve(a, b) for a in t.args])


def _unify_pairs(pairs: Iterable[tuple]):
    """Martelli-Montanari over a worklist; returns a triangular binding map or a
    ``(reason, lhs, rhs)`` failure triple."""
    b: dict = {}
    stack = list(pairs)
    while stack:
        x, y = stack.pop()
        x = _walk(x, b)
        y = _walk(y, b)
        if x is y:
            continue
        if isinstance(x, Var):
            if isinstance(y, Var):
                if x.name == y.name:
                    continue
                # bind the larger name so each class is represented by its minimum
                if x.name < y.name:
                    b[y] = x
                else:
                    b[x] = y
            else:
                if not y.ground and _occurs(x, y, b):
                    return ("occurs", x, y)
                b[x] = y
        elif isinstance(y, Var):
            if not x.ground and _occurs(y, x, b):
                return ("occurs", y, x)
            b[y] = x
        elif x.ground and y.ground:
            if x != y:
                return ("clash", x, y)
        elif x.functor != y.functor or len(x.args) != len(y.args):
            return ("clash", x, y)
        else:
            stack.extend(zip(x.args, y.args))
    return b


def solve_pairs(pairs: Iterable[tuple]):
    """Canonical solved form of ``lhs = rhs`` pairs, or ``None`` if unsolvable."""
    b = _unify_pairs(pairs)
    if isinstance(b, tuple):
        return None
    return {v: _resolve(t, b) for v, t in b.items()}


def match_ground(patterns: Sequence[Term], values: Sequence[Term]):
    """Solved form of ``patterns[i] = values[i]`` when every value is ground.

    Equivalent to :func:`solve_pairs` on such input (a ground right-hand side
    leaves nothing to orient and no occurs check), but cheaper.
    """
    b: dict = {}
    stack = list(zip(patterns, values))
    while stack:
        p, v = stack.pop()
        if isinstance(p, Var):
            bound = b.get(p)
            if bound is None:
                b[p] = v
            elif bound != v:
                return None
        elif p.ground:
            if p != v:
                return None
        elif p.functor != v.functor or len(p.args) != len(v.args):
            return None
        else:
            stack.extend(zip(p.args, v.args))
    return b


def solve(eqs: Iterable) -> Substitution:
    """Solve a set of term equations.

    Accepts :class:`TermEquation` objects or ``(lhs, rhs)`` pairs. The result
    is idempotent and independent of equation order: among variables equated to
    each other, the one with the smallest name is kept free.

    Raises :class:`UnificationError` on a functor clash or occurs-check failure.
    """
    pairs = [(e.lhs, e.rhs) if isinstance(e, TermEquation) else tuple(e) for e in eqs]
    b = _unify_pairs(pairs)
    if isinstance(b, tuple):
        raise UnificationError(*b)
    return {v: _resolve(t, b) for v, t in b.items()}


def unify(t0: Term, t1: Term) -> Substitution:
    return solve([(t0, t1)])


def unify_tuples(ts0: Sequence[Term], ts1: Sequence[Term]) -> Substitution:
    if len(ts0) != len(ts1):
        raise ValueError(f"tuple lengths differ: {len(ts0)} vs {len(ts1)}")
    return solve(zip(ts0, ts1))


# ---------------------------------------------------------------------------
# signature and universe


@dataclass(frozen=True)
class Signature:
    constants: frozenset = frozenset()
    functions: Mapping[str, int] = field(default_factory=dict)
    predicates: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(self.constants))
        object.__setattr__(self, "functions", dict(self.functions))
        object.__setattr__(self, "predicates", dict(self.predicates))
        clash = self.constants & set(self.functions)
        if clash:
            raise ValueError(f"symbols used as both constant and function: {sorted(clash)}")
        for f, n in self.functions.items():
            if n < 1:
                raise ValueError(f"function {f} must have arity >= 1, got {n}")

    def merge(self, other: "Signature") -> "Signature":
        for table_a, table_b, what in (
            (self.functions, other.functions, "function"),
            (self.predicates, other.predicates, "predicate"),
        ):
            for k in table_a.keys() & table_b.keys():
                if table_a[k] != table_b[k]:
                    raise ValueError(f"{what} {k} used with arities {table_a[k]} and {table_b[k]}")
        return Signature(
            self.constants | other.constants,
            {**self.functions, **other.functions},
            {**self.predicates, **other.predicates},
        )

    @classmethod
    def of_terms(cls, terms: Iterable[Term]) -> "Signature":
        consts: set = set()
        funcs: dict = {}
        stack = list(terms)
        while stack:
            t = stack.pop()
            if isinstance(t, Var):
                continue
            if not t.args:
                consts.add(t.functor)
                continue
            prev = funcs.setdefault(t.functor, len(t.args))
            if prev != len(t.args):
                raise ValueError(f"function {t.functor} used with arities {prev} and {len(t.args)}")
            stack.extend(t.args)
        return cls(frozenset(consts), funcs)


class Universe:
    """A signature together with a depth bound; induces the finite Herb_d."""

    def __init__(self, signature: Signature, depth: int):
        if depth < 0:
            raise ValueError("depth bound must be >= 0")
        self.signature = signature
        self.depth = depth
        self._levels: dict = {}

    @classmethod
    def of(cls, constants=(), functions=None, depth=0) -> "Universe":
        return cls(Signature(frozenset(constants), dict(functions or {})), depth)

    def __repr__(self):
        sig = self.signature
        return (
            f"Universe(constants={sorted(sig.constants)}, "
            f"functions={dict(sorted(sig.functions.items()))}, depth={self.depth})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, Universe)
            and self.depth == other.depth
            and self.signature.constants == other.signature.constants
            and self.signature.functions == other.signature.functions
        )

    def __hash__(self):
        return hash((self.depth, self.signature.constants, tuple(sorted(self.signature.functions.items()))))

    def terms(self, depth: int = None) -> tuple:
        """Ground terms of depth <= ``depth`` (default: the bound), sorted."""
        if depth is None:
            depth = self.depth
        if depth < 0:
            return ()
        if depth not in self._levels:
            self._levels[depth] = tuple(self._build(depth))
        return self._levels[depth]

    def _build(self, depth: int) -> list:
        sig = self.signature
        if not sig.constants:
            raise ValueError("signature has no constants: the Herbrand universe is empty")
        out = [Fn(c) for c in sorted(sig.constants)]
        if depth > 0:
            below = self.terms(depth - 1)
            for f, n in sorted(sig.functions.items()):
                for args in cartesian(below, repeat=n):
                    t = Fn(f, args)
                    if t.depth == depth:
                        out.append(t)
            out = list(below) + out[len(sig.constants):]
        out.sort(key=term_key)
        return out

    def contains(self, t: Term) -> bool:
        if not t.ground or t.depth > self.depth:
            return False
        sig = self.signature
        stack = [t]
        while stack:
            x = stack.pop()
            if not x.args:
                if x.functor not in sig.constants:
                    return False
            else:
                if sig.functions.get(x.functor) != len(x.args):
                    return False
                stack.extend(x.args)
        return True


def enumerate_ground(u: Universe) -> list:
    return list(u.terms())


# ---------------------------------------------------------------------------
# grounding with the clipping rule


def _skeleton(t: Term, level: int, budget: dict) -> int:
    """Depth of ``t`` with variables counted as depth 0; records in ``budget`` the
    deepest position at which each variable occurs."""
    if isinstance(t, Var):
        if budget.get(t, -1) < level:
            budget[t] = level
        return 0
    if t.ground:
        return t.depth
    return 1 + max(_skeleton(a, level + 1, budget) for a in t.args)


def instantiate(ts: Sequence[Term], u: Universe) -> Iterator[tuple]:
    """All ground instances of ``ts`` over Herb_d whose components stay within depth d.

    Each variable only ranges over terms shallow enough for its deepest
    occurrence, which yields exactly the clipped enumeration without visiting
    the discarded instances.
    """
    ts = tuple(ts)
    budget: dict = {}
    for t in ts:
        if _skeleton(t, 0, budget) > u.depth:
            return
    if not budget:
        yield ts
        return
    vs = sorted(budget, key=lambda v: v.name)
    pools = []
    for v in vs:
        room = u.depth - budget[v]
        if room < 0:
            return
        pools.append(u.terms(room))
    for values in cartesian(*pools):
        s = dict(zip(vs, values))
        yield tuple(_subst(t, s) for t in ts)


def count_clipped(ts: Sequence[Term], u: Universe) -> int:
    """How many naive instantiations over Herb_d the clipping rule discards."""
    budget: dict = {}
    over = max((_skeleton(t, 0, budget) for t in ts), default=0) > u.depth
    n = len(u.terms())
    total = n ** len(budget)
    if over:
        return total
    kept = 1
    for v, level in budget.items():
        room = u.depth - level
        kept *= len(u.terms(room)) if room >= 0 else 0
    return total - kept


def ground_instances(ts: Sequence[Term], u: Universe) -> set:
    return set(instantiate(ts, u))
