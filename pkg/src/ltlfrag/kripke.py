"""Kripke structures, lassos, and the graph queries the engines are built on."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class KripkeError(ValueError):
    pass


class InvalidLassoError(KripkeError):
    pass


@dataclass(frozen=True, eq=False)
class Kripke:
    """States, a (total) edge relation, a labeling and a designated initial state.

    The constructor does not enforce totality; call :func:`validate`.
    """

    states: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    labels: Mapping[str, frozenset[str]]
    initial: str

    def __init__(self, states: Iterable[str], edges: Iterable[tuple[str, str]],
                 labels: Mapping[str, Iterable[str]] | None = None, initial: str | None = None):
        states = tuple(states)
        if len(set(states)) != len(states):
            raise KripkeError("duplicate state names")
        labels = labels or {}
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "edges", frozenset((str(u), str(v)) for u, v in edges))
        object.__setattr__(self, "labels", MappingProxyType(
            {s: frozenset(labels.get(s, ())) for s in states}
            | {s: frozenset(v) for s, v in labels.items() if s not in set(states)}
        ))
        object.__setattr__(self, "initial", states[0] if initial is None and states else initial)

    def __eq__(self, other):
        if not isinstance(other, Kripke):
            return NotImplemented
        return (self.states == other.states and self.edges == other.edges
                and dict(self.labels) == dict(other.labels) and self.initial == other.initial)

    def __hash__(self):
        return hash((self.states, self.edges, self.initial))

    def __repr__(self):
        return f"Kripke(|W|={len(self.states)}, |R|={len(self.edges)}, initial={self.initial!r})"

    @cached_property
    def succ(self) -> Mapping[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {s: [] for s in self.states}
        for u, v in sorted(self.edges, key=lambda e: (self._index.get(e[0], -1), self._index.get(e[1], -1))):
            out.setdefault(u, []).append(v)
        return MappingProxyType({k: tuple(v) for k, v in out.items()})

    @cached_property
    def pred(self) -> Mapping[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {s: [] for s in self.states}
        for u, v in sorted(self.edges, key=lambda e: (self._index.get(e[0], -1), self._index.get(e[1], -1))):
            out.setdefault(v, []).append(u)
        return MappingProxyType({k: tuple(v) for k, v in out.items()})

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def variables(self) -> frozenset[str]:
        return frozenset().union(*self.labels.values()) if self.labels else frozenset()

    def with_initial(self, state: str) -> "Kripke":
        return Kripke(self.states, self.edges, self.labels, state)

    def with_labels(self, labels: Mapping[str, Iterable[str]]) -> "Kripke":
        return Kripke(self.states, self.edges, labels, self.initial)

    # -- structured-text file format ---------------------------------------

    def to_dict(self) -> dict:
        return {
            "states": list(self.states),
            "edges": [[u, v] for u, v in sorted(self.edges, key=lambda e: (self._index.get(e[0], -1), self._index.get(e[1], -1)))],
            "labels": {s: sorted(self.labels[s]) for s in self.states},
            "initial": self.initial,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Kripke":
        missing = {"states", "edges", "initial"} - set(data)
        if missing:
            raise KripkeError(f"structure file lacks field(s): {', '.join(sorted(missing))}")
        edges = []
        for e in data["edges"]:
            if len(e) != 2:
                raise KripkeError(f"edge must be a 2-list: {e!r}")
            edges.append((str(e[0]), str(e[1])))
        labels = {str(k): [str(x) for x in v] for k, v in data.get("labels", {}).items()}
        return cls([str(s) for s in data["states"]], edges, labels, str(data["initial"]))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Kripke":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Lasso:
    """An ultimately periodic path: ``prefix`` followed by ``cycle`` forever."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise InvalidLassoError("lasso cycle must be nonempty")

    def __getitem__(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def __len__(self) -> int:
        return len(self.prefix) + len(self.cycle)

    @property
    def start(self) -> str:
        return self[0]

    def unroll(self, n: int) -> list[str]:
        return [self[i] for i in range(n)]

    def __str__(self) -> str:
        return f"{' '.join(self.prefix)} | {' '.join(self.cycle)}".strip()


def validate(k: Kripke) -> list[str]:
    """Problems with ``k`` as human-readable strings; empty means valid."""
    errors = []
    known = set(k.states)
    if not k.states:
        errors.append("no states")
    if k.initial not in known:
        errors.append(f"initial state {k.initial!r} is not a state")
    for u, v in sorted(k.edges):
        for end in (u, v):
            if end not in known:
                errors.append(f"edge ({u!r}, {v!r}) mentions unknown state {end!r}")
    for s in k.labels:
        if s not in known:
            errors.append(f"label for unknown state {s!r}")
    for s in k.states:
        if not any(v in known for v in k.succ.get(s, ())):
            errors.append(f"relation is not total: {s!r} has no successor")
    return errors


def check_lasso(k: Kripke, lasso: Lasso, start: str | None = None) -> None:
    """Raise :class:`InvalidLassoError` unless every step of ``lasso`` is an edge."""
    seq = list(lasso.prefix) + list(lasso.cycle) + [lasso.cycle[0]]
    for s in seq:
        if s not in k._index:
            raise InvalidLassoError(f"unknown state {s!r} in lasso")
    for u, v in zip(seq, seq[1:]):
        if (u, v) not in k.edges:
            raise InvalidLassoError(f"({u}, {v}) is not an edge")
    if start is not None and lasso.start != start:
        raise InvalidLassoError(f"lasso starts at {lasso.start!r}, expected {start!r}")


# --------------------------------------------------------------------------
# Graph queries


def reach_exact(k: Kripke, source: str, d: int) -> frozenset[str]:
    """States at the end of some walk of exactly ``d`` steps."""
    if d < 0:
        raise ValueError("d must be non-negative")
    layer = {source}
    for _ in range(d):
        layer = {v for u in layer for v in k.succ.get(u, ())}
    return frozenset(layer)


def reach(k: Kripke, source: str | Iterable[str], within: Iterable[str] | None = None) -> frozenset[str]:
    """Reflexive-transitive closure from ``source``, optionally inside ``within``."""
    allowed = None if within is None else set(within)
    sources = [source] if isinstance(source, str) else list(source)
    seen = {s for s in sources if allowed is None or s in allowed}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in k.succ.get(u, ()):
            if v not in seen and (allowed is None or v in allowed):
                seen.add(v)
                queue.append(v)
    return frozenset(seen)


def on_cycle_within(k: Kripke, subset: Iterable[str]) -> frozenset[str]:
    """States of ``subset`` lying on a cycle of the subgraph induced by ``subset``."""
    subset = set(subset)
    out = set()
    for s in subset:
        if s in out:
            continue
        succs = [v for v in k.succ.get(s, ()) if v in subset]
        if s in succs or s in reach(k, succs, within=subset):
            out.add(s)
    return frozenset(out)


def shortest_walk(k: Kripke, source: str, targets: Iterable[str],
                  within: Iterable[str] | None = None, min_steps: int = 0) -> list[str] | None:
    """A shortest walk from ``source`` to some target, staying in ``within``.

    The walk has at least ``min_steps`` steps. Returns the state list
    (``source`` first) or ``None``.
    """
    targets = set(targets)
    allowed = None if within is None else set(within)
    if allowed is not None and source not in allowed:
        return None
    start = (source, 0)
    cap = max(min_steps, 0)
    parent: dict[tuple[str, int], tuple[str, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        s, c = node
        if c >= cap and s in targets:
            path = []
            while node is not None:
                path.append(node[0])
                node = parent[node]
            return path[::-1]
        for v in k.succ.get(s, ()):
            if allowed is not None and v not in allowed:
                continue
            nxt = (v, min(c + 1, cap))
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    return None


def cycle_through(k: Kripke, state: str, within: Iterable[str] | None = None) -> list[str] | None:
    """A cycle ``[state, ..., last]`` with ``last -> state`` an edge, inside ``within``."""
    allowed = None if within is None else set(within)
    if allowed is not None and state not in allowed:
        return None
    best = None
    for v in k.succ.get(state, ()):
        if allowed is not None and v not in allowed:
            continue
        if v == state:
            return [state]
        walk = shortest_walk(k, v, [state], within=allowed)
        if walk is not None and (best is None or len(walk) < len(best)):
            best = walk
    if best is None:
        return None
    return [state] + best[:-1]


def close_walk(k: Kripke, walk: Sequence[str]) -> Lasso:
    """Extend a finite walk to a lasso that keeps the whole walk as its prefix.

    Follows first successors from the last state until a state repeats.
    """
    walk = list(walk)
    ext = [walk[-1]]
    seen = {walk[-1]: 0}
    while True:
        succs = k.succ.get(ext[-1], ())
        if not succs:
            raise KripkeError(f"{ext[-1]!r} has no successor")
        nxt = succs[0]
        if nxt in seen:
            j = seen[nxt]
            return Lasso(tuple(walk[:-1] + ext[:j]), tuple(ext[j:]))
        seen[nxt] = len(ext)
        ext.append(nxt)


def lasso_from_walk_and_cycle(walk: Sequence[str], cycle: Sequence[str]) -> Lasso:
    """``walk`` ends at ``cycle[0]``; the cycle then repeats."""
    walk = list(walk)
    if walk and walk[-1] != cycle[0]:
        raise InvalidLassoError("walk does not end at the cycle start")
    return Lasso(tuple(walk[:-1]), tuple(cycle))


def closed_walks(k: Kripke, max_len: int, starts: Iterable[str] | None = None):
    """All closed walks ``(c0, ..., c_{l-1})`` with ``1 <= l <= max_len``."""
    starts = k.states if starts is None else starts
    for s in starts:
        stack = [(s, (s,))]
        while stack:
            u, path = stack.pop()
            succs = k.succ.get(u, ())
            if s in succs:
                yield path
            if len(path) < max_len:
                for v in reversed(succs):
                    stack.append((v, path + (v,)))


def exact_walk(k: Kripke, source: str, target: str, d: int) -> list[str] | None:
    """A walk of exactly ``d`` steps from ``source`` to ``target``."""
    layers = [{source: None}]
    for _ in range(d):
        nxt: dict[str, str] = {}
        for u in layers[-1]:
            for v in k.succ.get(u, ()):
                nxt.setdefault(v, u)
        layers.append(nxt)
    if target not in layers[-1]:
        return None
    path = [target]
    for layer in reversed(layers[1:]):
        path.append(layer[path[-1]])
    return path[::-1]
