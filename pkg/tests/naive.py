"""Reference implementations used only by the tests: no shared code with the package."""

from __future__ import annotations

from ltlfrag.formula import Apply, Temporal, Temporal2, Var, temporal_depth
from ltlfrag.kripke import Lasso


def holds(phi, k, lasso: Lasso, i: int = 0) -> bool:
    """Truth at position ``i`` read straight off the quantifier definitions.

    Future quantifiers range over a window long enough to cover one full
    period after every subformula has become periodic.
    """
    p, c = len(lasso.prefix), len(lasso.cycle)
    span = p + (temporal_depth(phi) + 2) * c
    memo: dict = {}

    def at(node, j: int) -> bool:
        key = (node, j)
        if key in memo:
            return memo[key]
        match node:
            case Var(name):
                out = name in k.labels[lasso[j]]
            case Apply(fn, args):
                out = bool(fn(*(at(a, j) for a in args)))
            case Temporal("X", child):
                out = at(child, j + 1)
            case Temporal("F", child):
                out = any(at(child, t) for t in range(j, j + span))
            case Temporal("G", child):
                out = all(at(child, t) for t in range(j, j + span))
            case Temporal2("U", left, right):
                out = any(at(right, t) and all(at(left, r) for r in range(j, t))
                          for t in range(j, j + span))
            case Temporal2("S", left, right):
                out = any(at(right, t) and all(at(left, r) for r in range(t + 1, j + 1))
                          for t in range(0, j + 1))
        memo[key] = out
        return out

    return at(phi, i)


def all_lassos(k, start: str, max_prefix: int, max_cycle: int):
    """Every lasso from ``start`` with the given bounds, by plain enumeration."""
    def walks(src, length):
        # walks with exactly ``length`` states beginning at src
        if length == 1:
            yield (src,)
            return
        for w in walks(src, length - 1):
            for v in sorted(t for (u, t) in k.edges if u == w[-1]):
                yield w + (v,)

    for p in range(0, max_prefix + 1):
        prefixes = [()] if p == 0 else list(walks(start, p))
        for pre in prefixes:
            heads = [start] if p == 0 else sorted(t for (u, t) in k.edges if u == pre[-1])
            for h in heads:
                for c in range(1, max_cycle + 1):
                    for cyc in walks(h, c):
                        if (cyc[-1], cyc[0]) in k.edges:
                            yield Lasso(pre, cyc)


def brute_force(phi, k, start, max_prefix, max_cycle):
    """Least total length of a satisfying lasso within the bounds, or None."""
    best = None
    for lasso in all_lassos(k, start, max_prefix, max_cycle):
        if (best is None or len(lasso) < best) and holds(phi, k, lasso):
            best = len(lasso)
    return best
