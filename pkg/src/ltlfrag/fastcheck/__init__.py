"""Tractable-fragment engines, the complexity table and the dispatcher."""

from .dispatch import ROUTES, Routed, default_bounds, dispatch, route
from .engines import (
    ENGINES,
    FragmentError,
    NormalForm,
    fg_v,
    fgx_n,
    fx_v,
    gx_e,
    normal_form,
    run_automaton,
    s_only,
    sf_v,
    strip_since,
    x_l,
)
from .table import COLUMNS, ROWS, TABLE, Classification, Label, classify_cell, classify_problem, row_of

__all__ = [
    "COLUMNS", "ENGINES", "ROUTES", "ROWS", "TABLE", "Classification", "FragmentError", "Label",
    "NormalForm", "Routed", "classify_cell", "classify_problem", "default_bounds", "dispatch",
    "fg_v", "fgx_n", "fx_v", "gx_e", "normal_form", "route", "row_of", "run_automaton", "s_only",
    "sf_v", "strip_since", "x_l",
]
