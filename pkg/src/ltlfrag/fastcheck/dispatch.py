"""Route an instance to the engine for its fragment, or to the bounded oracle."""

from __future__ import annotations

from dataclasses import dataclass

from ..clones import CloneId, classify_clone, eliminate_constants
from ..formula import Formula, fragment_of
from ..kripke import Kripke, close_walk
from ..semantics import Sat, Unsat, Verdict, check_bounded, eval_prop, verified
from .engines import ENGINES
from .table import Classification, classify_problem

# (engine, allowed temporal operators, largest clone). First match wins.
ROUTES: tuple[tuple[str, str, CloneId], ...] = (
    ("s_only", "S", CloneId.BF),
    ("fx_v", "FX", CloneId.V),
    ("gx_e", "GX", CloneId.E),
    ("fg_v", "FG", CloneId.V),
    ("x_l", "X", CloneId.L),
    ("sf_v", "SF", CloneId.V),
    ("fgx_n", "FGX", CloneId.N),
)


@dataclass(frozen=True)
class Routed:
    verdict: Verdict
    engine: str
    classification: Classification


def route(phi: Formula) -> str | None:
    """Name of the engine that decides ``phi``; None means only the oracle applies."""
    sig = fragment_of(phi)
    if not sig.temporal:
        return "eval_prop"
    clone = classify_clone(sig.base)
    for name, ops, top in ROUTES:
        if sig.temporal <= set(ops) and clone <= top:
            return name
    return None


def default_bounds(k: Kripke) -> tuple[int, int]:
    return 2 * len(k.states), len(k.states)


def dispatch(phi: Formula, k: Kripke, a: str, max_prefix: int | None = None,
             max_cycle: int | None = None) -> Routed:
    sig = fragment_of(phi)
    cls = classify_problem(sig.temporal, sig.base)
    engine = route(phi)
    phi2, k2, a2 = eliminate_constants(phi, k, a)
    if engine == "eval_prop":
        if eval_prop(phi2, k2, a2):
            return Routed(verified(phi, k, close_walk(k, [a]), a), engine, cls)
        return Routed(Unsat(), engine, cls)
    if engine is not None:
        verdict = ENGINES[engine](phi2, k2, a2)
        if isinstance(verdict, Sat):
            verdict = verified(phi, k, verdict.witness, a)
        return Routed(verdict, engine, cls)
    p, c = default_bounds(k)
    p = p if max_prefix is None else max_prefix
    c = c if max_cycle is None else max_cycle
    return Routed(check_bounded(phi, k, a, p, c), f"oracle (hardness class: {cls})", cls)
