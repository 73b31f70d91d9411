"""Exact evaluation on lassos and a bounded existential search used as ground truth."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .formula import (
    Apply,
    Formula,
    FormulaError,
    Temporal,
    Temporal2,
    Var,
    eval_bool,
    subformulas,
    temporal_depth,
    walk,
)
from .kripke import Kripke, Lasso, check_lasso, closed_walks, reach_exact


# --------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Sat:
    witness: Lasso

    @property
    def is_sat(self) -> bool:
        return True


@dataclass(frozen=True)
class UnsatUpTo:
    bound: int

    @property
    def is_sat(self) -> bool:
        return False


@dataclass(frozen=True)
class Unsat:
    @property
    def is_sat(self) -> bool:
        return False


Verdict = Sat | UnsatUpTo | Unsat


class WitnessError(AssertionError):
    """A Sat witness failed to re-verify."""


# --------------------------------------------------------------------------
# Compiled formulas


class _Compiled:
    """Post-order node table for one formula; shared by every evaluator here."""

    def __init__(self, phi: Formula):
        self.phi = phi
        self.nodes = subformulas(phi)
        self.index = {n: i for i, n in enumerate(self.nodes)}
        self.root = self.index[phi]
        self.kind: list[str] = []
        self.kids: list[tuple[int, ...]] = []
        for n in self.nodes:
            match n:
                case Var():
                    self.kind.append("var")
                case Apply():
                    self.kind.append("fn")
                case Temporal(op, _) | Temporal2(op, _, _):
                    self.kind.append(op)
            self.kids.append(tuple(self.index[c] for c in n.children()))
        self.depth = temporal_depth(phi)
        self.s_nodes = [i for i, k in enumerate(self.kind) if k == "S"]
        self.has_past = bool(self.s_nodes)
        # X-parents of each node: the forward search checks prev[X psi] == cur[psi]
        self.x_parents: list[list[int]] = [[] for _ in self.nodes]
        for i, k in enumerate(self.kind):
            if k == "X":
                self.x_parents[self.kids[i][0]].append(i)

    def atom(self, i: int, label: frozenset) -> bool:
        return self.nodes[i].name in label

    def apply(self, i: int, vals) -> bool:
        fn = self.nodes[i].fn
        return bool(fn(*(vals[c] for c in self.kids[i])))


def _window(comp: _Compiled, labels: list[frozenset], p: int, c: int,
            past: Mapping[int, bool] | None = None) -> list[list[bool]]:
    """Values of every node at positions ``0..L-1`` of the unrolled lasso."""
    L = len(labels)
    last = L - c
    past = past or {}
    vals: list[list[bool]] = [None] * len(comp.nodes)  # type: ignore[list-item]

    def nxt(i: int) -> int:
        return i + 1 if i + 1 < L else last

    for i, kind in enumerate(comp.kind):
        kids = comp.kids[i]
        match kind:
            case "var":
                name = comp.nodes[i].name
                v = [name in lab for lab in labels]
            case "fn":
                fn = comp.nodes[i].fn
                cols = [vals[k] for k in kids]
                v = [bool(fn(*(col[t] for col in cols))) for t in range(L)]
            case "X":
                ch = vals[kids[0]]
                v = [ch[nxt(t)] for t in range(L)]
            case "S":
                a, b = vals[kids[0]], vals[kids[1]]
                v = [False] * L
                prev = past.get(i, False)
                for t in range(L):
                    prev = b[t] or (a[t] and prev)
                    v[t] = prev
            case "F" | "G" | "U":
                v = [False] * L
                if kind == "U":
                    a, b = vals[kids[0]], vals[kids[1]]
                    step = lambda t, carry: b[t] or (a[t] and carry)  # noqa: E731
                    carry = False
                elif kind == "F":
                    ch = vals[kids[0]]
                    step = lambda t, carry: ch[t] or carry  # noqa: E731
                    carry = False
                else:
                    ch = vals[kids[0]]
                    step = lambda t, carry: ch[t] and carry  # noqa: E731
                    carry = True
                # the last block is periodic: two sweeps reach the fixpoint
                for _ in range(2):
                    for t in range(L - 1, last - 1, -1):
                        carry = step(t, carry)
                        v[t] = carry
                carry = v[last]
                for t in range(last - 1, -1, -1):
                    carry = step(t, carry)
                    v[t] = carry
        vals[i] = v
    return vals


def _labels_of(k: Kripke, lasso: Lasso, depth: int) -> tuple[list[frozenset], int, int]:
    p, c = len(lasso.prefix), len(lasso.cycle)
    L = p + (depth + 1) * c
    return [k.labels[lasso[t]] for t in range(L)], p, c


def evaluate(phi: Formula, k: Kripke, lasso: Lasso, past: Mapping[Formula, bool] | None = None,
             extra_blocks: int = 0) -> dict[Formula, list[bool]]:
    """Truth of every subformula over the evaluation window of ``lasso``.

    ``past`` seeds the since-recurrence at position -1 (default: all false).
    ``extra_blocks`` lengthens the window by whole cycles.
    """
    comp = _Compiled(phi)
    labels, p, c = _labels_of(k, lasso, comp.depth + extra_blocks)
    seed = {comp.index[n]: v for n, v in (past or {}).items() if n in comp.index}
    vals = _window(comp, labels, p, c, seed)
    return {n: vals[i] for i, n in enumerate(comp.nodes)}


def eval_lasso(phi: Formula, k: Kripke, lasso: Lasso) -> bool:
    """Whether the path denoted by ``lasso`` satisfies ``phi`` at position 0."""
    check_lasso(k, lasso)
    comp = _Compiled(phi)
    labels, p, c = _labels_of(k, lasso, comp.depth)
    return _window(comp, labels, p, c)[comp.root][0]


def eval_prop(phi: Formula, k: Kripke, state: str) -> bool:
    """Value of a temporal-free formula under the labeling of ``state``."""
    if any(isinstance(n, (Temporal, Temporal2)) for n in walk(phi)):
        raise FormulaError("eval_prop needs a formula without temporal operators")
    return eval_bool(phi, k.labels[state])


def verified(phi: Formula, k: Kripke, lasso: Lasso, start: str) -> Sat:
    """Wrap ``lasso`` in :class:`Sat` after re-checking it."""
    check_lasso(k, lasso, start)
    if not eval_lasso(phi, k, lasso):
        raise WitnessError(f"witness {lasso} does not satisfy {phi}")
    return Sat(lasso)


# --------------------------------------------------------------------------
# Bounded oracle


def check_bounded(phi: Formula, k: Kripke, start: str, max_prefix: int, max_cycle: int) -> Verdict:
    """Search every lasso from ``start`` with bounded prefix and cycle.

    Returns a witness of least total length when one exists, otherwise
    ``UnsatUpTo(max_prefix + max_cycle)``. Complete only up to the bounds.
    """
    if max_prefix < 0 or max_cycle < 1:
        raise ValueError("need max_prefix >= 0 and max_cycle >= 1")
    comp = _Compiled(phi)
    search = _search_past if comp.has_past else _search_future
    found = search(comp, k, start, max_prefix, max_cycle)
    if found is None:
        return UnsatUpTo(max_prefix + max_cycle)
    return verified(phi, k, found, start)


def _cycle_entry_vector(comp: _Compiled, k: Kripke, cycle: tuple[str, ...],
                        past: tuple[bool, ...] | None = None) -> tuple[bool, ...]:
    labels = [k.labels[s] for s in cycle] * (comp.depth + 1)
    seed = dict(zip(comp.s_nodes, past)) if past is not None else None
    vals = _window(comp, labels, 0, len(cycle), seed)
    return tuple(col[0] for col in vals)


def _cycles_by_length(k: Kripke, starts, max_cycle: int) -> dict[int, list[tuple[str, ...]]]:
    out: dict[int, list[tuple[str, ...]]] = {}
    for cyc in closed_walks(k, max_cycle, starts):
        out.setdefault(len(cyc), []).append(cyc)
    return out


def _step_back(comp: _Compiled, label: frozenset, nxt: tuple[bool, ...]) -> tuple[bool, ...]:
    """Future-only node values at a state given the values one step later."""
    cur: list[bool] = [False] * len(comp.nodes)
    for i, kind in enumerate(comp.kind):
        kids = comp.kids[i]
        match kind:
            case "var":
                cur[i] = comp.nodes[i].name in label
            case "fn":
                cur[i] = comp.apply(i, cur)
            case "X":
                cur[i] = nxt[kids[0]]
            case "F":
                cur[i] = cur[kids[0]] or nxt[i]
            case "G":
                cur[i] = cur[kids[0]] and nxt[i]
            case "U":
                cur[i] = cur[kids[1]] or (cur[kids[0]] and nxt[i])
    return tuple(cur)


def _search_future(comp, k: Kripke, start: str, max_prefix: int, max_cycle: int) -> Lasso | None:
    layers = [reach_exact(k, start, j) for j in range(max_prefix + 1)]
    starts = sorted(set().union(*layers), key=k.states.index)
    cycles = _cycles_by_length(k, starts, max_cycle)
    best: Lasso | None = None
    for length in sorted(cycles):
        if best is not None and length >= len(best):
            break
        seeds: dict[tuple[str, tuple], tuple[str, ...]] = {}
        for cyc in cycles[length]:
            key = (cyc[0], _cycle_entry_vector(comp, k, cyc))
            seeds.setdefault(key, cyc)
        budget = max_prefix if best is None else min(max_prefix, len(best) - length - 1)
        hit = _backward_bfs(comp, k, start, seeds, budget)
        if hit is not None:
            prefix, cyc = hit
            cand = Lasso(prefix, cyc)
            if best is None or len(cand) < len(best):
                best = cand
    return best


def _backward_bfs(comp, k: Kripke, start: str, seeds: dict, budget: int):
    """Shortest prefix leading from ``start`` into one of ``seeds``."""
    parent: dict[tuple, tuple | None] = {}
    frontier = []
    for key in seeds:
        parent[key] = None
        frontier.append(key)
    depth = 0
    while True:
        for node in frontier:
            s, vec = node
            if s == start and vec[comp.root]:
                # walk forward along parents to the seed
                prefix = []
                cur = node
                while parent[cur] is not None:
                    prefix.append(cur[0])
                    cur = parent[cur]
                return tuple(prefix), seeds[cur]
        if depth >= budget:
            return None
        nxt_frontier = []
        for node in frontier:
            s, vec = node
            for u in k.pred.get(s, ()):
                key = (u, _step_back(comp, k.labels[u], vec))
                if key not in parent:
                    parent[key] = node
                    nxt_frontier.append(key)
        if not nxt_frontier:
            return None
        frontier = nxt_frontier
        depth += 1


def _consistent(comp: _Compiled, label: frozenset, prev: tuple[bool, ...] | None):
    """All node vectors at one position, given the vector one step earlier.

    Present and past nodes are computed; future nodes are guessed and
    filtered by the one-step unfolding constraints against ``prev``.
    """
    n = len(comp.nodes)
    cur: list[bool] = [False] * n
    out: list[tuple[bool, ...]] = []

    def ok_x_parents(i: int) -> bool:
        return prev is None or all(prev[x] == cur[i] for x in comp.x_parents[i])

    def go(i: int):
        if i == n:
            out.append(tuple(cur))
            return
        kind = comp.kind[i]
        kids = comp.kids[i]
        match kind:
            case "var":
                options = (comp.nodes[i].name in label,)
            case "fn":
                options = (comp.apply(i, cur),)
            case "S":
                before = prev[i] if prev is not None else False
                options = (cur[kids[1]] or (cur[kids[0]] and before),)
            case "X":
                options = (False, True)
            case "F":
                options = (True,) if cur[kids[0]] else (False, True)
            case "G":
                options = (False,) if not cur[kids[0]] else (False, True)
            case "U":
                if cur[kids[1]]:
                    options = (True,)
                elif not cur[kids[0]]:
                    options = (False,)
                else:
                    options = (False, True)
        for val in options:
            cur[i] = val
            if prev is not None and not _unfolds(comp, i, prev, val):
                continue
            if not ok_x_parents(i):
                continue
            go(i + 1)

    go(0)
    return out


def _unfolds(comp: _Compiled, i: int, prev: tuple[bool, ...], val: bool) -> bool:
    kids = comp.kids[i]
    match comp.kind[i]:
        case "F":
            return prev[i] == (prev[kids[0]] or val)
        case "G":
            return prev[i] == (prev[kids[0]] and val)
        case "U":
            return prev[i] == (prev[kids[1]] or (prev[kids[0]] and val))
    return True


def _junction_ok(comp: _Compiled, prev: tuple[bool, ...], cur: tuple[bool, ...]) -> bool:
    for i, kind in enumerate(comp.kind):
        if kind == "X" and prev[i] != cur[comp.kids[i][0]]:
            return False
        if kind in ("F", "G", "U") and not _unfolds(comp, i, prev, cur[i]):
            return False
    return True


def _search_past(comp, k: Kripke, start: str, max_prefix: int, max_cycle: int) -> Lasso | None:
    layers = [reach_exact(k, start, j) for j in range(max_prefix + 1)]
    starts = sorted(set().union(*layers), key=k.states.index)
    cycles = _cycles_by_length(k, starts, max_cycle)
    by_start: dict[str, list[tuple[str, ...]]] = {}
    for length in sorted(cycles):
        for cyc in cycles[length]:
            by_start.setdefault(cyc[0], []).append(cyc)

    cache: dict[tuple, tuple[bool, ...]] = {}

    def entry(cyc, past):
        key = (cyc, past)
        if key not in cache:
            cache[key] = _cycle_entry_vector(comp, k, cyc, past)
        return cache[key]

    best: Lasso | None = None
    # prefix length 0: the cycle starts at ``start`` with an empty past
    for cyc in by_start.get(start, ()):
        if best is not None and len(cyc) >= len(best):
            break
        if entry(cyc, None)[comp.root]:
            best = Lasso((), cyc)
    layer: dict[tuple, tuple | None] = {}
    for vec in _consistent(comp, k.labels[start], None):
        if vec[comp.root]:
            layer[(start, vec)] = None
    history = [layer]
    for j in range(1, max_prefix + 1):
        if not layer or (best is not None and j + 1 >= len(best)):
            break
        # close the prefix of length j with a cycle
        for node in layer:
            s, vec = node
            past = tuple(vec[i] for i in comp.s_nodes)
            for c0 in k.succ.get(s, ()):
                for cyc in by_start.get(c0, ()):
                    if best is not None and j + len(cyc) >= len(best):
                        break
                    if _junction_ok(comp, vec, entry(cyc, past)):
                        best = Lasso(_trace(history, node), cyc)
                        break
        if j == max_prefix:
            break
        nxt: dict[tuple, tuple | None] = {}
        for node in layer:
            s, vec = node
            for u in k.succ.get(s, ()):
                for v2 in _consistent(comp, k.labels[u], vec):
                    key = (u, v2)
                    if key not in nxt:
                        nxt[key] = node
        layer = nxt
        history.append(layer)
    return best


def _trace(history: list[dict], node) -> tuple[str, ...]:
    states = []
    for layer in reversed(history):
        states.append(node[0])
        node = layer[node]
    return tuple(reversed(states))


def minimal_witness(phi: Formula, k: Kripke, start: str, cap: int = 64) -> Lasso | None:
    """Least total-length witness, growing the bounds until one is found."""
    n = 1
    while n <= cap:
        res = check_bounded(phi, k, start, n, n)
        if isinstance(res, Sat):
            total = len(res.witness)
            if total <= n:
                return res.witness
            n = total
            continue
        n *= 2
    return None
