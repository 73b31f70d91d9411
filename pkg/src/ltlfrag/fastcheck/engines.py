"""Polynomial-time deciders for the tractable fragments.

Each engine checks its fragment precondition, decides the instance by
reachability in an explicit graph, and backs every Sat answer with a
lasso that has been re-evaluated.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

from ..clones import (
    CloneId,
    classify_clone,
    conjunctive_form,
    disjunctive_form,
    linear_form,
    unary_form,
)
from ..formula import (
    Apply,
    Formula,
    Temporal,
    Temporal2,
    Var,
    fragment_of,
)
from ..kripke import (
    Kripke,
    Lasso,
    close_walk,
    cycle_through,
    exact_walk,
    on_cycle_within,
    reach,
    reach_exact,
    shortest_walk,
)
from ..semantics import Unsat, Verdict, eval_prop, verified


class FragmentError(ValueError):
    """The formula lies outside the engine's fragment."""


def require(phi: Formula, temporal: str, clone: CloneId | None) -> None:
    sig = fragment_of(phi)
    extra = sig.temporal - set(temporal)
    if extra:
        raise FragmentError(f"operators {sorted(extra)} not allowed here (only {set(temporal) or '{}'})")
    if clone is not None:
        got = classify_clone(sig.base)
        if not got <= clone:
            raise FragmentError(f"base generates clone {got.value}, needs {clone.value} or below")


def _lasso(walk: list[str], cycle: list[str]) -> Lasso:
    assert walk[-1] == cycle[0]
    return Lasso(tuple(walk[:-1]), tuple(cycle))


def _join(*walks: list[str]) -> list[str]:
    out = list(walks[0])
    for w in walks[1:]:
        assert out[-1] == w[0]
        out.extend(w[1:])
    return out


def _g_witness(k: Kripke, b: str, region: Iterable[str]) -> tuple[list[str], list[str]] | None:
    """From ``b`` stay inside ``region`` forever: a walk to a cycle and the cycle."""
    region = frozenset(region)
    if b not in region:
        return None
    loops = on_cycle_within(k, region)
    walk = shortest_walk(k, b, loops, within=region)
    if walk is None:
        return None
    return walk, cycle_through(k, walk[-1], within=region)


# --------------------------------------------------------------------------
# F, G, X over unary bases: the X^m P ~y normal form


@dataclass(frozen=True)
class NormalForm:
    m: int
    prefix: str  # "", "F", "G", "FG" or "GF"
    negated: bool
    leaf: str | bool  # variable name or constant

    def __str__(self) -> str:
        neg = "!" if self.negated else ""
        leaf = self.leaf if isinstance(self.leaf, str) else str(int(self.leaf))
        return f"{'X' * self.m}{self.prefix}{neg}{leaf}"


# Reading an operator (already dualised by a pending negation) from the
# current prefix. FF = F, GG = G, FGF = GF, GFG = FG.
_AUTOMATON = {
    ("", "F"): "F", ("", "G"): "G",
    ("F", "F"): "F", ("F", "G"): "FG",
    ("G", "F"): "GF", ("G", "G"): "G",
    ("FG", "F"): "GF", ("FG", "G"): "FG",
    ("GF", "F"): "GF", ("GF", "G"): "FG",
}


def run_automaton(ops: Iterable[str]) -> tuple[str, bool]:
    """Fold an outside-in string over {F, G, !} (X is skipped) into (P, negated)."""
    prefix, neg = "", False
    for op in ops:
        match op:
            case "!":
                neg = not neg
            case "F" | "G":
                effective = op if not neg else ("G" if op == "F" else "F")
                prefix = _AUTOMATON[prefix, effective]
            case "X":
                pass
            case _:
                raise ValueError(f"unexpected symbol {op!r}")
    return prefix, neg


def normal_form(phi: Formula) -> NormalForm:
    """``phi`` over {F,G,X} and an essentially unary base as ``X^m P ~y``."""
    ops: list[str] = []
    m = 0
    node = phi
    while True:
        match node:
            case Var(name):
                leaf: str | bool = name
                break
            case Temporal("X", child):
                m += 1
                node = child
            case Temporal(op, child):
                ops.append(op)
                node = child
            case Apply(fn, args):
                pos, flag = unary_form(fn)
                if pos is None:
                    leaf = flag
                    break
                if flag:
                    ops.append("!")
                node = args[pos]
            case _:
                raise FragmentError(f"unexpected node {node}")
    prefix, neg = run_automaton(ops)
    return NormalForm(m, prefix, neg, leaf)


def fgx_n(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "FGX", CloneId.N)
    nf = normal_form(phi)
    if isinstance(nf.leaf, bool):
        if nf.leaf != nf.negated:
            return verified(phi, k, close_walk(k, [a]), a)
        return Unsat()

    def lit(s: str) -> bool:
        return (nf.leaf in k.labels[s]) != nf.negated

    good = frozenset(s for s in k.states if lit(s))
    for b in sorted(reach_exact(k, a, nf.m), key=k.states.index):
        found = _resolve(k, b, nf.prefix, good)
        if found is None:
            continue
        head = exact_walk(k, a, b, nf.m)
        walk, cycle = found
        if cycle is None:
            return verified(phi, k, close_walk(k, _join(head, walk)), a)
        return verified(phi, k, _lasso(_join(head, walk), cycle), a)
    return Unsat()


def _resolve(k: Kripke, b: str, prefix: str, good: frozenset):
    """A continuation from ``b`` meeting ``P ~y``: ``(walk, cycle or None)``."""
    match prefix:
        case "":
            return ([b], None) if b in good else None
        case "F":
            walk = shortest_walk(k, b, good)
            return (walk, None) if walk is not None else None
        case "G":
            return _g_witness(k, b, good)
        case "FG":
            for c in sorted(reach(k, b), key=k.states.index):
                found = _g_witness(k, c, good)
                if found is not None:
                    return _join(shortest_walk(k, b, [c]), found[0]), found[1]
            return None
        case "GF":
            loops = on_cycle_within(k, k.states) & good
            walk = shortest_walk(k, b, loops)
            if walk is None:
                return None
            return walk, cycle_through(k, walk[-1])
    raise ValueError(prefix)


# --------------------------------------------------------------------------
# F, X over join-homomorphic bases


def _fx_terms(phi: Formula) -> frozenset[tuple[bool, int, str | bool]]:
    """Disjuncts ``(has_F, i, leaf)`` meaning ``F X^i leaf`` or ``X^i leaf``."""

    @lru_cache(maxsize=None)
    def go(node: Formula, i: int, f: bool) -> frozenset:
        match node:
            case Var(name):
                return frozenset({(f, i, name)})
            case Temporal("X", child):
                return go(child, i + 1, f)
            case Temporal("F", child):
                return go(child, i, True)
            case Apply(fn, args):
                c0, picked = disjunctive_form(fn)
                if c0:
                    return frozenset({(f, i, True)})
                return frozenset().union(*(go(args[j], i, f) for j in picked))
        raise FragmentError(f"unexpected node {node}")

    return go(phi, 0, False)


def fx_v(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "FX", CloneId.V)
    return _decide_fx(phi, _fx_terms(phi), k, a)


def _decide_fx(phi: Formula, terms, k: Kripke, a: str) -> Verdict:
    def holds(leaf, s: str) -> bool:
        return leaf is True or leaf in k.labels[s]

    order = sorted(terms, key=lambda t: (t[1], t[0], str(t[2])))
    for has_f, i, leaf in order:
        layer = sorted(reach_exact(k, a, i), key=k.states.index)
        if not has_f:
            for b in layer:
                if holds(leaf, b):
                    return verified(phi, k, close_walk(k, exact_walk(k, a, b, i)), a)
            continue
        targets = [s for s in k.states if holds(leaf, s)]
        for b in layer:
            tail = shortest_walk(k, b, targets)
            if tail is not None:
                walk = _join(exact_walk(k, a, b, i), tail)
                return verified(phi, k, close_walk(k, walk), a)
    return Unsat()


# --------------------------------------------------------------------------
# G, X over meet-homomorphic bases


def _gx_terms(phi: Formula) -> frozenset[tuple[bool, int, str | bool]]:
    """Conjuncts ``(has_G, i, leaf)``; a ``False`` leaf makes the formula false."""

    @lru_cache(maxsize=None)
    def go(node: Formula, i: int, g: bool) -> frozenset:
        match node:
            case Var(name):
                return frozenset({(g, i, name)})
            case Temporal("X", child):
                return go(child, i + 1, g)
            case Temporal("G", child):
                return go(child, i, True)
            case Apply(fn, args):
                c0, picked = conjunctive_form(fn)
                if not c0:
                    return frozenset({(g, i, False)})
                return frozenset().union(*(go(args[j], i, g) for j in picked))
        raise FragmentError(f"unexpected node {node}")

    return go(phi, 0, False)


def g_region(k: Kripke, leaves: Iterable[str]) -> frozenset[str]:
    """States where every invariant variable holds at once."""
    leaves = list(leaves)
    return frozenset(s for s in k.states if all(y in k.labels[s] for y in leaves))


def gx_e(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "GX", CloneId.E)
    terms = _gx_terms(phi)
    if any(leaf is False for _, _, leaf in terms):
        return Unsat()
    top = max((i for _, i, _ in terms), default=0)
    g_leaves = {leaf for g, _, leaf in terms if g}
    region = g_region(k, g_leaves)

    def allowed(s: str, depth: int) -> bool:
        for g, i, leaf in terms:
            if (i == depth or (g and i <= depth)) and leaf not in k.labels[s]:
                return False
        return True

    if not allowed(a, 0):
        return Unsat()
    # layered search over (state, depth <= top)
    layers: list[dict[str, str | None]] = [{a: None}]
    for depth in range(1, top + 1):
        nxt: dict[str, str] = {}
        for u in layers[-1]:
            for v in k.succ[u]:
                if v not in nxt and allowed(v, depth):
                    nxt[v] = u
        if not nxt:
            return Unsat()
        layers.append(nxt)
    for c in sorted(layers[-1], key=k.states.index):
        found = _g_witness(k, c, region)
        if found is None:
            continue
        head = [c]
        for layer in reversed(layers[1:]):
            head.append(layer[head[-1]])
        head.reverse()
        walk, cycle = found
        return verified(phi, k, _lasso(_join(head, walk), cycle), a)
    return Unsat()


# --------------------------------------------------------------------------
# F, G over join-homomorphic bases: the recursive procedure with a mode
# flag, explored as reachability over its configurations


@dataclass(frozen=True)
class _Or:
    items: tuple

@dataclass(frozen=True)
class _F:
    child: object

@dataclass(frozen=True)
class _G:
    child: object

@dataclass(frozen=True)
class _Leaf:
    var: str | bool  # True: holds everywhere; False: nowhere


def _fg_tree(phi: Formula):
    @lru_cache(maxsize=None)
    def go(node: Formula):
        match node:
            case Var(name):
                return _Leaf(name)
            case Temporal("F", child):
                return _F(go(child))
            case Temporal("G", child):
                return _G(go(child))
            case Apply(fn, args):
                c0, picked = disjunctive_form(fn)
                if c0:
                    return _Leaf(True)
                if not picked:
                    return _Leaf(False)
                if len(picked) == 1:
                    return go(args[picked[0]])
                return _Or(tuple(go(args[j]) for j in picked))
        raise FragmentError(f"unexpected node {node}")

    return go(phi)


@dataclass(frozen=True)
class _Config:
    root: object
    psi: object
    b: str
    c: int
    ffound: bool
    always: bool


def fg_v(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "FG", CloneId.V)
    tree = _fg_tree(phi)
    n = len(k.states)
    start = _Config(tree, tree, a, 0, False, False)
    # parent[config] = (previous config, states walked, event)
    parent: dict[_Config, tuple | None] = {start: None}
    queue = deque([start])
    accepted = None
    while queue and accepted is None:
        cfg = queue.popleft()
        for nxt, steps, event in _fg_moves(cfg, k, n):
            if nxt == "accept":
                accepted = (cfg, steps, event)
                break
            if nxt not in parent:
                parent[nxt] = (cfg, steps, event)
                queue.append(nxt)
    if accepted is None:
        return Unsat()
    return verified(phi, k, _fg_witness(k, parent, *accepted), a)


def _fg_moves(cfg: _Config, k: Kripke, n: int):
    """Successor configurations as ``(config or "accept", walked states, event)``."""
    psi = cfg.psi
    match psi:
        case _Or(items):
            for item in items:
                yield _Config(cfg.root, item, cfg.b, cfg.c, cfg.ffound, cfg.always), [], None
            return
        case _F(child):
            yield _Config(cfg.root, child, cfg.b, cfg.c, True, cfg.always), [], None
            return
    if cfg.ffound:
        # up to |W| guessed steps; every reachable state is within that range
        for b2 in sorted(reach(k, cfg.b), key=k.states.index):
            walk = shortest_walk(k, cfg.b, [b2])
            yield _Config(cfg.root, psi, b2, cfg.c, False, cfg.always), walk[1:], None
        return
    match psi:
        case _G(child):
            yield _Config(child, child, cfg.b, 0, False, True), [], "call"
        case _Leaf(var):
            if var is False or (var is not True and var not in k.labels[cfg.b]):
                return
            if not cfg.always:
                yield "accept", [], "now"
                return
            if cfg.c + 1 > n:
                yield "accept", [], "check"
                return
            for b2 in k.succ[cfg.b]:
                yield _Config(cfg.root, cfg.root, b2, cfg.c + 1, False, True), [b2], "check"


def _fg_witness(k: Kripke, parent: dict, last: _Config, steps, event) -> Lasso:
    moves = [(steps, event)]
    cfg = last
    while parent[cfg] is not None:
        prev, st, ev = parent[cfg]
        moves.append((st, ev))
        cfg = prev
    moves.reverse()
    walk = [cfg.b]
    checks: list[int] = []
    for st, ev in moves:
        if ev == "call":
            checks = []
        elif ev == "check":
            checks.append(len(walk) - 1)
        walk.extend(st)
    if event == "now":
        return close_walk(k, walk)
    # |W|+1 checked states in the last call: two of them coincide
    seen: dict[str, int] = {}
    for pos in checks:
        s = walk[pos]
        if s in seen:
            first = seen[s]
            return Lasso(tuple(walk[: first + 1]), tuple(walk[first + 1 : pos + 1]))
        seen[s] = pos
    raise AssertionError("counter reached |W|+1 without a repeated state")


# --------------------------------------------------------------------------
# X over affine bases: parity along a guessed walk


def _x_terms(phi: Formula) -> tuple[bool, Counter]:
    """``c0`` and the multiset of ``(i, y)`` for ``c0 xor XOR X^i y``."""

    @lru_cache(maxsize=None)
    def go(node: Formula, i: int) -> tuple[bool, tuple]:
        match node:
            case Var(name):
                return False, ((i, name),)
            case Temporal("X", child):
                return go(child, i + 1)
            case Apply(fn, args):
                c0, picked = linear_form(fn)
                items: list = []
                for j in picked:
                    c, sub = go(args[j], i)
                    c0 ^= c
                    items.extend(sub)
                return c0, tuple(items)
        raise FragmentError(f"unexpected node {node}")

    c0, items = go(phi, 0)
    counts = Counter(items)
    return c0, Counter({t: 1 for t, n in counts.items() if n % 2})


def x_l(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "X", CloneId.L)
    c0, terms = _x_terms(phi)
    m = max((i for i, _ in terms), default=0)
    by_depth: dict[int, list[str]] = {}
    for i, y in terms:
        by_depth.setdefault(i, []).append(y)

    def flip(s: str, depth: int) -> bool:
        return sum(y in k.labels[s] for y in by_depth.get(depth, ())) % 2 == 1

    start = (a, c0 ^ flip(a, 0))
    layers: list[dict[tuple, tuple | None]] = [{start: None}]
    for depth in range(1, m + 1):
        nxt: dict[tuple, tuple] = {}
        for node in layers[-1]:
            s, parity = node
            for v in k.succ[s]:
                key = (v, parity ^ flip(v, depth))
                nxt.setdefault(key, node)
        layers.append(nxt)
    for node in layers[-1]:
        if node[1]:
            walk = [node]
            for layer in reversed(layers[1:]):
                walk.append(layer[walk[-1]])
            states = [s for s, _ in reversed(walk)]
            return verified(phi, k, close_walk(k, states), a)
    return Unsat()


# --------------------------------------------------------------------------
# Since at the start of a path


def strip_since(phi: Formula) -> Formula:
    """Replace every ``alpha S beta`` by ``beta``, outermost first."""

    @lru_cache(maxsize=None)
    def go(node: Formula) -> Formula:
        match node:
            case Temporal2("S", _, right):
                return go(right)
            case Var():
                return node
            case Apply(fn, args):
                return Apply(fn, tuple(go(x) for x in args))
            case Temporal(op, child):
                return Temporal(op, go(child))
            case Temporal2(op, left, right):
                return Temporal2(op, go(left), go(right))
        raise FragmentError(f"unexpected node {node}")

    return go(phi)


def s_only(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "S", None)
    if eval_prop(strip_since(phi), k, a):
        return verified(phi, k, close_walk(k, [a]), a)
    return Unsat()


def sf_v(phi: Formula, k: Kripke, a: str) -> Verdict:
    require(phi, "SF", CloneId.V)
    return _decide_fx(phi, _fx_terms(strip_since(phi)), k, a)


ENGINES: dict[str, Callable[[Formula, Kripke, str], Verdict]] = {
    "fgx_n": fgx_n,
    "fx_v": fx_v,
    "gx_e": gx_e,
    "fg_v": fg_v,
    "x_l": x_l,
    "s_only": s_only,
    "sf_v": sf_v,
}
