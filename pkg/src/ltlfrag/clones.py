"""The seven Boolean clones that contain both constants, and base transformations.

With 0 and 1 always available the relevant part of Post's lattice is::

         BF
        /  \\
       M    L
      / \\   |
     E   V  N
      \\  |  /
         I

Membership is decided by five exhaustive predicates over truth tables.
"""

from __future__ import annotations

from enum import Enum
from itertools import product
from typing import Iterable

import numpy as np

from .formula import (
    AND,
    BUILTINS,
    CONST0,
    CONST1,
    FALSE,
    NOT,
    OR,
    TRUE,
    Apply,
    BoolFun,
    Formula,
    FormulaError,
    Temporal,
    Temporal2,
    Var,
    eval_bool,
    fresh_name,
    substitute,
    subformulas,
    variables,
    walk,
)

MAX_ARITY = 8


class CloneId(str, Enum):
    I = "I"
    N = "N"
    E = "E"
    V = "V"
    M = "M"
    L = "L"
    BF = "BF"

    def __le__(self, other: "CloneId") -> bool:
        return other in _UP[self]

    def __lt__(self, other: "CloneId") -> bool:
        return self != other and self <= other


_COVERS = {
    CloneId.I: {CloneId.N, CloneId.E, CloneId.V},
    CloneId.N: {CloneId.L},
    CloneId.E: {CloneId.M},
    CloneId.V: {CloneId.M},
    CloneId.L: {CloneId.BF},
    CloneId.M: {CloneId.BF},
    CloneId.BF: set(),
}


def _upset(c: CloneId) -> frozenset:
    out = {c}
    for d in _COVERS[c]:
        out |= _upset(d)
    return frozenset(out)


_UP = {c: _upset(c) for c in CloneId}

# A standard base for each clone (constants included).
CLONE_BASES: dict[CloneId, tuple[BoolFun, ...]] = {
    CloneId.BF: (AND, NOT),
    CloneId.M: (OR, AND, CONST0, CONST1),
    CloneId.L: (BUILTINS["xor"], CONST1),
    CloneId.V: (OR, CONST1, CONST0),
    CloneId.E: (AND, CONST1, CONST0),
    CloneId.N: (NOT, CONST1, CONST0),
    CloneId.I: (CONST0, CONST1),
}


class CloneError(ValueError):
    pass


class RepresentationNotFound(CloneError):
    """The bounded search gave up; the target may still be representable."""


class NotRepresentable(CloneError):
    """The target connective is not in the clone generated by the base."""


def _inputs(arity: int) -> np.ndarray:
    """Rows of all inputs in table order (big-endian), shape (2**arity, arity)."""
    idx = np.arange(1 << arity)
    shifts = np.arange(arity - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def _table(f: BoolFun) -> np.ndarray:
    return np.asarray(f.table, dtype=np.uint8)


def is_monotone(f: BoolFun) -> bool:
    t = _table(f)
    idx = np.arange(1 << f.arity)
    for bit in range(f.arity):
        mask = 1 << bit
        low = idx[(idx & mask) == 0]
        if np.any(t[low] > t[low | mask]):
            return False
    return True


def anf(f: BoolFun) -> np.ndarray:
    """Algebraic normal form coefficients (Moebius transform over GF(2)).

    Coefficient ``k`` belongs to the monomial over the inputs whose bits are
    set in ``k`` (same big-endian convention as the truth table).
    """
    c = _table(f).copy()
    n = 1 << f.arity
    step = 1
    while step < n:
        for start in range(0, n, 2 * step):
            c[start + step:start + 2 * step] ^= c[start:start + step]
        step *= 2
    return c


def is_affine(f: BoolFun) -> bool:
    c = anf(f)
    degrees = np.array([bin(k).count("1") for k in range(len(c))])
    return not np.any(c[degrees > 1])


def is_meet_hom(f: BoolFun) -> bool:
    t = _table(f)
    idx = np.arange(1 << f.arity)
    meet = idx[:, None] & idx[None, :]
    return bool(np.all(t[meet] == (t[:, None] & t[None, :])))


def is_join_hom(f: BoolFun) -> bool:
    t = _table(f)
    idx = np.arange(1 << f.arity)
    join = idx[:, None] | idx[None, :]
    return bool(np.all(t[join] == (t[:, None] | t[None, :])))


def essential_variables(f: BoolFun) -> list[int]:
    """0-based argument positions the function actually depends on."""
    t = _table(f)
    idx = np.arange(1 << f.arity)
    out = []
    for pos in range(f.arity):
        mask = 1 << (f.arity - 1 - pos)
        low = idx[(idx & mask) == 0]
        if np.any(t[low] != t[low | mask]):
            out.append(pos)
    return out


def essentially_unary(f: BoolFun) -> bool:
    return len(essential_variables(f)) <= 1


def is_projection_or_constant(f: BoolFun) -> bool:
    ess = essential_variables(f)
    if not ess:
        return True
    if len(ess) > 1:
        return False
    # a single essential variable: projection iff f(e_pos) = 1 and f(0) = 0
    return f.table[0] == 0 and f.table[-1] == 1


_PREDICATES = {
    CloneId.I: is_projection_or_constant,
    CloneId.N: essentially_unary,
    CloneId.E: is_meet_hom,
    CloneId.V: is_join_hom,
    CloneId.L: is_affine,
    CloneId.M: is_monotone,
    CloneId.BF: lambda f: True,
}
_CASCADE = (CloneId.I, CloneId.N, CloneId.E, CloneId.V, CloneId.L, CloneId.M, CloneId.BF)


def in_clone(f: BoolFun, clone: CloneId) -> bool:
    return _PREDICATES[clone](f)


def classify_clone(base: Iterable[BoolFun], max_arity: int = MAX_ARITY) -> CloneId:
    """Least clone with constants containing ``base``."""
    base = list(base)
    for f in base:
        if f.arity > max_arity:
            raise CloneError(f"{f.name}/{f.arity} exceeds the arity cap {max_arity}")
    for clone in _CASCADE:
        if all(_PREDICATES[clone](f) for f in base):
            return clone
    raise AssertionError("unreachable")


# --------------------------------------------------------------------------
# Decompositions used by the engines. Each assumes membership in its clone.


def unary_form(f: BoolFun) -> tuple[int | None, bool]:
    """For f in N: ``(None, value)`` if constant, else ``(position, negated)``."""
    ess = essential_variables(f)
    if not ess:
        return None, bool(f.table[0])
    if len(ess) != 1:
        raise CloneError(f"{f.name} is not essentially unary")
    return ess[0], f.table[0] == 1


def _unit(arity: int, pos: int) -> int:
    return 1 << (arity - 1 - pos)


def disjunctive_form(f: BoolFun) -> tuple[bool, list[int]]:
    """For f in V: ``f = c0 or OR(args[i] for i in S)``; returns ``(c0, S)``."""
    c0 = bool(f.table[0])
    if c0:
        return True, []
    return False, [i for i in range(f.arity) if f.table[_unit(f.arity, i)]]


def conjunctive_form(f: BoolFun) -> tuple[bool, list[int]]:
    """For f in E: ``f = c0 and AND(args[i] for i in S)``; returns ``(c0, S)``."""
    full = (1 << f.arity) - 1
    c0 = bool(f.table[full])
    if not c0:
        return False, []
    return True, [i for i in range(f.arity) if not f.table[full ^ _unit(f.arity, i)]]


def linear_form(f: BoolFun) -> tuple[bool, list[int]]:
    """For f in L: ``f = c0 xor XOR(args[i] for i in S)``; returns ``(c0, S)``."""
    c0 = bool(f.table[0])
    return c0, [i for i in range(f.arity) if bool(f.table[_unit(f.arity, i)]) != c0]


# --------------------------------------------------------------------------
# Read-once representation of and/or/not over a base


_TARGETS = {"and": AND, "or": OR, "not": NOT}


def is_read_once(phi: Formula) -> bool:
    names = [n.name for n in walk(phi) if isinstance(n, Var)]
    return len(names) == len(set(names))


def represent_connective(
    base: Iterable[BoolFun], target: str, max_depth: int = 4
) -> Formula:
    """A read-once formula over ``base`` and the constants computing ``target``.

    Placeholders are ``Var("x1")``, ``Var("x2")``, used exactly once each.
    Raises :class:`NotRepresentable` if ``target`` lies outside the generated
    clone, and :class:`RepresentationNotFound` if the depth-bounded search fails.
    """
    if target not in _TARGETS:
        raise CloneError(f"target must be one of {sorted(_TARGETS)}")
    goal = _TARGETS[target]
    base = [f for f in base if f.arity > 0]
    clone = classify_clone(base)
    if not in_clone(goal, clone):
        raise NotRepresentable(f"{target} is not in the clone {clone.value}")
    k = goal.arity
    names = tuple(f"x{i + 1}" for i in range(k))
    rows = list(product((0, 1), repeat=k))

    def table_of(phi: Formula) -> tuple[int, ...]:
        return tuple(int(eval_bool(phi, dict(zip(names, r)))) for r in rows)

    goal_table = goal.table
    # best[(depth, varset)] -> {table: formula}; each placeholder used exactly once
    cache: dict[tuple[int, frozenset], dict[tuple, Formula]] = {}

    def options(depth: int, varset: frozenset) -> dict[tuple, Formula]:
        key = (depth, varset)
        if key in cache:
            return cache[key]
        out: dict[tuple, Formula] = {}
        if not varset:
            out[table_of(FALSE)] = FALSE
            out.setdefault(table_of(TRUE), TRUE)
        elif len(varset) == 1:
            (v,) = varset
            out[table_of(Var(v))] = Var(v)
        if depth > 0:
            ordered = sorted(varset)
            for f in base:
                for placement in product(range(f.arity), repeat=len(ordered)):
                    parts = [frozenset(v for v, p in zip(ordered, placement) if p == slot)
                             for slot in range(f.arity)]
                    child_opts = [options(depth - 1, part) for part in parts]
                    if any(not c for c in child_opts):
                        continue
                    for combo in product(*(list(c.values()) for c in child_opts)):
                        phi = Apply(f, combo)
                        out.setdefault(table_of(phi), phi)
        cache[key] = out
        return out

    everything = frozenset(names)
    for depth in range(1, max_depth + 1):
        found = options(depth, everything).get(goal_table)
        if found is not None:
            return found
    raise RepresentationNotFound(
        f"no read-once {target} over {[f.name for f in base]} up to depth {max_depth}"
    )


def instantiate(template: Formula, args: tuple[Formula, ...]) -> Formula:
    """Plug ``args`` into the placeholders ``x1, x2, ...`` of a template."""
    mapping = {f"x{i + 1}": a for i, a in enumerate(args)}

    def go(node: Formula) -> Formula:
        match node:
            case Var(name):
                return mapping.get(name, node)
            case Apply(fn, children):
                return Apply(fn, tuple(go(c) for c in children))
        raise FormulaError("templates are propositional")

    return go(template)


# --------------------------------------------------------------------------
# Instance transformations that preserve the model-checking answer


def eliminate_constants(phi: Formula, kripke, state):
    """Replace 0/1 by fresh variables ``bot``/``top``; ``top`` labels every state."""
    from .kripke import Kripke

    taken = set(variables(phi)) | set().union(*kripke.labels.values())
    top = fresh_name("top", taken)
    bot = fresh_name("bot", taken | {top})
    mapping = {}
    for node in walk(phi):
        if isinstance(node, Apply) and node.fn.arity == 0:
            mapping[node] = Var(top) if node.fn.table[0] else Var(bot)
    if not mapping:
        return phi, kripke, state
    new_phi = substitute(phi, mapping)
    uses_top = Var(top) in set(walk(new_phi))
    labels = {s: set(kripke.labels[s]) | ({top} if uses_top else set()) for s in kripke.states}
    return new_phi, Kripke(kripke.states, kripke.edges, labels, kripke.initial), state


class NegationScopeError(FormulaError):
    pass


def _is_negation(node: Formula) -> bool:
    return isinstance(node, Apply) and node.fn.arity == 1 and node.fn.table == NOT.table


def eliminate_prop_negation(phi: Formula, kripke, state):
    """Replace each propositional subformula ``!psi`` by a fresh variable.

    The fresh variable labels exactly the states falsifying ``psi``.
    """
    from .kripke import Kripke

    negations = [n for n in subformulas(phi) if _is_negation(n)]
    for n in negations:
        if any(isinstance(m, (Temporal, Temporal2)) for m in walk(n)):
            raise NegationScopeError(f"negation scopes a temporal operator: {n}")
    if not negations:
        return phi, kripke, state
    taken = set(variables(phi)) | set().union(*kripke.labels.values())
    labels = {s: set(kripke.labels[s]) for s in kripke.states}
    mapping = {}
    for n in negations:
        # outermost negations win; inner ones disappear with their scope
        name = fresh_name(f"y_not_{len(mapping) + 1}", taken)
        taken.add(name)
        inner = n.args[0]
        mapping[n] = Var(name)
        for s in kripke.states:
            if not eval_bool(inner, frozenset(kripke.labels[s])):
                labels[s].add(name)
    new_phi = substitute(phi, mapping)
    used = variables(new_phi)
    unused = {v.name for v in mapping.values()} - used
    labels = {s: lab - unused for s, lab in labels.items()}
    return new_phi, Kripke(kripke.states, kripke.edges, labels, kripke.initial), state


def rebase(phi: Formula, base: Iterable[BoolFun], max_depth: int = 4) -> Formula:
    """Rewrite every and/or/not in ``phi`` via read-once templates over ``base``."""
    base = list(base)
    templates: dict[BoolFun, Formula] = {}
    names = {AND: "and", OR: "or", NOT: "not"}

    def template_for(fn: BoolFun) -> Formula | None:
        if fn in base or fn.arity == 0:
            return None
        if fn not in names:
            raise CloneError(f"cannot rebase connective {fn.name}")
        if fn not in templates:
            templates[fn] = represent_connective(base, names[fn], max_depth)
        return templates[fn]

    def go(node: Formula) -> Formula:
        match node:
            case Var():
                return node
            case Temporal(op, child):
                return Temporal(op, go(child))
            case Temporal2(op, left, right):
                return Temporal2(op, go(left), go(right))
            case Apply(fn, args):
                args = tuple(go(a) for a in args)
                t = template_for(fn)
                return Apply(fn, args) if t is None else instantiate(t, args)
        raise TypeError(node)

    return go(phi)

