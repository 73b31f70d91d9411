"""Model checking for fragments of LTL over restricted temporal operators and Boolean bases."""

from .clones import CloneId, classify_clone, eliminate_constants, represent_connective
from .fastcheck import Classification, Label, classify_problem, dispatch, route
from .formula import (
    AND,
    NOT,
    OR,
    XOR,
    BoolFun,
    F,
    G,
    S,
    U,
    X,
    Var,
    fragment_of,
    parse_formula,
    print_formula,
)
from .gadgets import Cnf, GadgetInstance, exp_family
from .kripke import Kripke, Lasso, validate
from .semantics import Sat, Unsat, UnsatUpTo, check_bounded, eval_lasso, eval_prop

__all__ = [
    "AND", "NOT", "OR", "XOR", "BoolFun", "Classification", "CloneId", "Cnf", "F", "G",
    "GadgetInstance", "Kripke", "Label", "Lasso", "S", "Sat", "U", "Unsat", "UnsatUpTo", "Var",
    "X", "check_bounded", "classify_clone", "classify_problem", "dispatch", "eliminate_constants",
    "eval_lasso", "eval_prop", "exp_family", "fragment_of", "parse_formula", "print_formula",
    "represent_connective", "route", "validate",
]
