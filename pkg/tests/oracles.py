"""Independent list oracles for the append/member program."""

from tabsem.terms import Fn

NIL = Fn("nil")


def is_cons(t):
    return isinstance(t, Fn) and t.functor == "." and len(t.args) == 2


def proper_list(t):
    """Elements of a nil-terminated list, or None."""
    items = []
    while is_cons(t):
        items.append(t.args[0])
        t = t.args[1]
    return items if t == NIL else None


def concat(xs, tail):
    for x in reversed(xs):
        tail = Fn(".", (x, tail))
    return tail


def cons_elements(t):
    """Heads of every cons cell along the spine of ``t`` (tail may be anything)."""
    out = []
    while is_cons(t):
        out.append(t.args[0])
        t = t.args[1]
    return out


def app_oracle(herb):
    herb_set = set(herb)
    out = set()
    for x in herb:
        xs = proper_list(x)
        if xs is None:
            continue
        for y in herb:
            z = concat(xs, y)
            if z in herb_set:
                out.add((x, y, z))
    return out


def mem_oracle(herb):
    return {(e, y) for y in herb for e in cons_elements(y)}
