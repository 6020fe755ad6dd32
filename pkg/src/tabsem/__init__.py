"""Compositional table-algebra semantics for pure Prolog."""

from tabsem.relations import Relation, VarRelation
from tabsem.semantics import EvalContext, FixpointReport, lfp_M, lfp_T, query, tp_step
from tabsem.syntax import parse_goal, parse_program, parse_term, to_clausal, to_procedural
from tabsem.tables import TOP, Table, bottom, filter, product, product_all, project
from tabsem.terms import Atom, Fn, Signature, Universe, Var, solve, unify

__all__ = [
    "Atom", "EvalContext", "FixpointReport", "Fn", "Relation", "Signature", "TOP", "Table",
    "Universe", "Var", "VarRelation", "bottom", "filter", "lfp_M", "lfp_T", "parse_goal",
    "parse_program", "parse_term", "product", "product_all", "project", "query", "solve",
    "to_clausal", "to_procedural", "tp_step", "unify",
]
